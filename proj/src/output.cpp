#include "cuckoo_lab/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"

namespace cuckoo_lab {
namespace {

nlohmann::ordered_json to_json(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return format_number(x);
          return x;
        } else {
          return x;
        }
      },
      v);
}

std::string to_cell(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else {
          if (x.find_first_of(",\"\n") == std::string::npos) return x;
          std::string quoted = "\"";
          for (char c : x) {
            if (c == '"') quoted += '"';
            quoted += c;
          }
          return quoted + "\"";
        }
      },
      v);
}

std::vector<std::pair<std::string, std::string>> flatten(const OutputRecord& r) {
  std::vector<std::pair<std::string, std::string>> row;
  row.emplace_back("command", r.command);
  for (const auto& [k, v] : r.parameters) row.emplace_back(k, to_cell(v));
  for (const auto& [k, v] : r.results) row.emplace_back(k, to_cell(v));
  row.emplace_back("tool_version", kToolVersion);
  row.emplace_back("seed", r.seed ? std::to_string(*r.seed) : "");
  return row;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // Shortest of 15..17 significant digits that reads back as the same double.
  char buf[40];
  for (int digits = 15; digits < 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(std::ostream& out, std::span<const OutputRecord> records) {
  auto one = [](const OutputRecord& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.parameters) j["parameters"][k] = to_json(v);
    j["results"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.results) j["results"][k] = to_json(v);
    j["metadata"]["tool_version"] = kToolVersion;
    if (r.seed) {
      j["metadata"]["seed"] = *r.seed;
    } else {
      j["metadata"]["seed"] = nullptr;
    }
    return j;
  };
  if (records.size() == 1) {
    out << one(records.front()).dump(2) << "\n";
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) arr.push_back(one(r));
  out << arr.dump(2) << "\n";
}

void write_csv(std::ostream& out, std::span<const OutputRecord> records) {
  if (records.empty()) return;
  const auto header = flatten(records.front());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i].first;
  out << "\n";
  for (const auto& r : records) {
    const auto row = flatten(r);
    if (row.size() != header.size()) throw std::logic_error("csv rows differ in column count");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].second;
    out << "\n";
  }
}

}  // namespace cuckoo_lab
