#pragma once

// Machine-readable result records shared by every CLI subcommand. A record
// serializes to one JSON object or to one CSV row; numbers round-trip exactly in
// both formats.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cuckoo_lab {

inline constexpr const char* kToolVersion = "1.0.0";

using FieldValue = std::variant<double, std::int64_t, std::string>;

struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, FieldValue>> parameters;
  std::vector<std::pair<std::string, FieldValue>> results;
  std::optional<std::uint64_t> seed;

  void param(std::string name, FieldValue value) {
    parameters.emplace_back(std::move(name), std::move(value));
  }
  void result(std::string name, FieldValue value) {
    results.emplace_back(std::move(name), std::move(value));
  }
};

// Shortest round-trip form (at most 17 significant digits); non-finite values
// become "nan", "inf" or "-inf".
std::string format_number(double x);

void write_json(std::ostream& out, std::span<const OutputRecord> records);
// Header from the first record; later records must share its columns.
void write_csv(std::ostream& out, std::span<const OutputRecord> records);

}  // namespace cuckoo_lab
