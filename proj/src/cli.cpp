#include "cuckoo_lab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <stdexcept>

#include "CLI11.hpp"
#include "cuckoo_lab/asymptotics.hpp"
#include "cuckoo_lab/exact_model.hpp"
#include "cuckoo_lab/output.hpp"
#include "cuckoo_lab/simulate.hpp"
#include "cuckoo_lab/trace.hpp"

namespace cuckoo_lab::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kUsage =
    "usage: cuckoo_lab <command> [flags]\n"
    "commands:\n"
    "  exact          expected maximum matching for finite n, m\n"
    "  asymptotic     limit of matching / n at load alpha\n"
    "  simulate       Monte-Carlo estimate of the maximum matching\n"
    "  stash-size     stash slots for a target overflow probability\n"
    "  trace          drive the cuckoo table with a key stream\n"
    "  concentration  empirical deviation frequency vs. the tail bound\n"
    "  sweep          run a command over PARAM=start:stop:step\n"
    "run 'cuckoo_lab <command> --help' for the flags of a command\n";

struct ModelFlags {
  std::string model = "d2";
  std::optional<double> a;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<unsigned> d;
  bool round = false;

  void add_to(CLI::App& app, const std::vector<std::string>& models) {
    app.add_option("--model", model, "graph model")->check(CLI::IsMember(models));
    app.add_option("--a", a, "mean number of choices in [1, 2]");
    app.add_option("--p", p, "probability of two choices");
    app.add_option("--beta", beta, "share of bins in the up bank");
    app.add_option("--d", d, "choices per element");
    app.add_flag("--round", round, "snap a*n or beta*m to the nearest integer");
  }
};

struct Invocation {
  CLI::App app;
  std::string format = "json";
  Invocation(const std::string& name) : app(name) {
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  }
  void parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  }
};

unsigned threads_from_env() {
  const char* env = std::getenv("CUCKOO_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError("CUCKOO_LAB_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

// Only the flag that belongs to the chosen model may be present.
void require_model_flags(const ModelFlags& f, const char* needed) {
  const std::string want = needed ? needed : "";
  auto check = [&](bool present, const char* name) {
    if (present && want != name) {
      throw UsageError(std::string("--") + name + " does not apply to --model " + f.model);
    }
    if (!present && want == name) {
      throw UsageError("--model " + f.model + " needs --" + name);
    }
  };
  check(f.a.has_value(), "a");
  check(f.p.has_value(), "p");
  check(f.beta.has_value(), "beta");
  check(f.d.has_value(), "d");
}

double snap_a(double a, std::uint64_t n, bool round, OutputRecord& rec) {
  if (!round || n == 0) return a;
  const double two = std::round((a - 1.0) * static_cast<double>(n));
  const double eff = 1.0 + two / static_cast<double>(n);
  rec.param("a_effective", eff);
  return eff;
}

double snap_beta(double beta, std::uint64_t m, bool round, OutputRecord& rec) {
  if (!round) return beta;
  const double eff = std::round(beta * static_cast<double>(m)) / static_cast<double>(m);
  rec.param("beta_effective", eff);
  return eff;
}

// Builds the model for commands that draw or evaluate finite graphs.
ModelParams finite_model(const ModelFlags& f, std::uint64_t n, std::uint64_t m, OutputRecord& rec) {
  ModelParams params{n, m, Fixed2{}};
  rec.param("model", f.model);
  if (f.model == "d2") {
    require_model_flags(f, nullptr);
  } else if (f.model == "mixed-det") {
    require_model_flags(f, "a");
    rec.param("a", *f.a);
    params.variant = MixedDet{snap_a(*f.a, n, f.round, rec)};
  } else if (f.model == "mixed-rand") {
    require_model_flags(f, "p");
    rec.param("p", *f.p);
    params.variant = MixedRand{*f.p};
  } else if (f.model == "partitioned") {
    require_model_flags(f, "beta");
    rec.param("beta", *f.beta);
    params.variant = Partitioned{snap_beta(*f.beta, m, f.round, rec)};
  } else {
    require_model_flags(f, "d");
    rec.param("d", static_cast<std::int64_t>(*f.d));
    params.variant = FixedD{*f.d};
  }
  validate(params);
  return params;
}

OutputRecord cmd_exact(Invocation& inv, const std::vector<std::string>& args) {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  bool no_truncate = false;
  ModelFlags model;
  inv.app.add_option("--n", n, "elements")->required();
  inv.app.add_option("--m", m, "bins")->required();
  inv.app.add_flag("--no-truncate", no_truncate, "sum every term");
  model.add_to(inv.app, {"d2", "mixed-det", "mixed-rand", "partitioned", "bound-d"});
  inv.parse(args);

  OutputRecord rec;
  rec.command = "exact";
  rec.param("n", static_cast<std::int64_t>(n));
  rec.param("m", static_cast<std::int64_t>(m));
  const SumOptions options{!no_truncate};
  ExactResult r{};
  if (model.model == "bound-d") {
    require_model_flags(model, "d");
    rec.param("model", model.model);
    rec.param("d", static_cast<std::int64_t>(*model.d));
    r.mu = matching_upper_bound_d(n, m, *model.d);
    r.stash_expected = static_cast<double>(n) - r.mu;
  } else {
    r = expected_matching(finite_model(model, n, m, rec), options);
  }
  rec.result("mu", r.mu);
  rec.result("stash_expected", r.stash_expected);
  rec.result("mu_over_n", n == 0 ? 0.0 : r.mu / static_cast<double>(n));
  rec.result("error_bound", r.error_bound);
  rec.result("terms", static_cast<std::int64_t>(r.terms.size()));
  rec.result("truncated_at",
             r.truncated_at ? static_cast<std::int64_t>(*r.truncated_at) : std::int64_t{-1});
  return rec;
}

OutputRecord cmd_asymptotic(Invocation& inv, const std::vector<std::string>& args) {
  double alpha = 1.0;
  ModelFlags f;
  inv.app.add_option("--alpha", alpha, "load n/m")->required();
  f.add_to(inv.app, {"d2", "mixed", "mixed-rand", "partitioned"});
  inv.parse(args);

  OutputRecord rec;
  rec.command = "asymptotic";
  rec.param("alpha", alpha);
  rec.param("model", f.model);
  AsymptoticResult r;
  if (f.model == "d2") {
    require_model_flags(f, nullptr);
    r = gamma_d2(alpha);
  } else if (f.model == "mixed") {
    require_model_flags(f, "a");
    rec.param("a", *f.a);
    r = gamma_mixed(alpha, *f.a);
  } else if (f.model == "mixed-rand") {
    require_model_flags(f, "p");
    rec.param("p", *f.p);
    r = gamma_mixed_rand(alpha, *f.p);
  } else {
    require_model_flags(f, "beta");
    rec.param("beta", *f.beta);
    r = gamma_partitioned(alpha, *f.beta);
  }
  rec.result("gamma", r.gamma);
  if (f.model == "partitioned") {
    rec.result("t1", r.branch ? r.branch->t1 : std::nan(""));
    rec.result("t2", r.branch ? r.branch->t2 : std::nan(""));
  }
  rec.result("closed_form_used", static_cast<std::int64_t>(r.closed_form_used));
  return rec;
}

OutputRecord cmd_simulate(Invocation& inv, const std::vector<std::string>& args) {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  ModelFlags f;
  inv.app.add_option("--n", n, "elements")->required();
  inv.app.add_option("--m", m, "bins")->required();
  inv.app.add_option("--trials", trials, "random graphs")->check(CLI::PositiveNumber);
  inv.app.add_option("--seed", seed, "generator seed");
  f.add_to(inv.app, {"d2", "mixed-det", "mixed-rand", "partitioned", "fixed-d"});
  inv.parse(args);

  OutputRecord rec;
  rec.command = "simulate";
  rec.seed = seed;
  rec.param("n", static_cast<std::int64_t>(n));
  rec.param("m", static_cast<std::int64_t>(m));
  const ModelParams params = finite_model(f, n, m, rec);
  rec.param("trials", static_cast<std::int64_t>(trials));
  const SimStats s = estimate_mu(params, trials, seed, threads_from_env());
  rec.result("mean", s.mean);
  rec.result("std_dev", s.std_dev);
  rec.result("min", s.min);
  rec.result("max", s.max);
  rec.result("std_error", s.std_error);
  rec.result("mean_over_n", n == 0 ? 0.0 : s.mean / static_cast<double>(n));
  return rec;
}

OutputRecord cmd_stash_size(Invocation& inv, const std::vector<std::string>& args) {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  double epsilon = 0.01;
  inv.app.add_option("--n", n, "elements")->required();
  inv.app.add_option("--m", m, "bins")->required();
  inv.app.add_option("--epsilon", epsilon, "target overflow probability")->required();
  inv.parse(args);

  OutputRecord rec;
  rec.command = "stash-size";
  rec.param("n", static_cast<std::int64_t>(n));
  rec.param("m", static_cast<std::int64_t>(m));
  rec.param("epsilon", epsilon);
  const double slots = stash_size_for_epsilon(n, m, epsilon);
  rec.result("stash_slots", slots);
  rec.result("stash_slots_ceil", static_cast<std::int64_t>(std::ceil(slots)));
  rec.result("stash_expected", expected_matching_d2(n, m).stash_expected);
  return rec;
}

OutputRecord cmd_trace(Invocation& inv, const std::vector<std::string>& args) {
  std::optional<std::string> input;
  std::optional<std::uint64_t> synthetic;
  std::string key_format = "hex-lines";
  std::uint32_t m = 1;
  unsigned d = 2;
  std::uint32_t repeats = 100;
  std::uint64_t seed = 1;
  std::optional<double> beta;
  std::optional<std::uint64_t> stash_limit;
  bool keep_duplicates = false;
  bool round = false;
  auto* in_opt = inv.app.add_option("--input", input, "key file");
  auto* syn_opt = inv.app.add_option("--synthetic", synthetic, "number of synthetic keys");
  in_opt->excludes(syn_opt);
  inv.app.add_option("--key-format", key_format, "key file format")
      ->check(CLI::IsMember({"hex-lines", "binary-u64-le"}));
  inv.app.add_option("--m", m, "bins")->required()->check(CLI::PositiveNumber);
  inv.app.add_option("--d", d, "choices per key");
  inv.app.add_option("--repeats", repeats, "independent hash seedings")
      ->check(CLI::PositiveNumber);
  inv.app.add_option("--seed", seed, "base seed");
  inv.app.add_option("--beta", beta, "partition the bins (d = 2)");
  inv.app.add_option("--stash-limit", stash_limit, "stash capacity to check");
  inv.app.add_flag("--keep-duplicates", keep_duplicates, "disambiguate repeated keys");
  inv.app.add_flag("--round", round, "snap beta*m to an integer");
  inv.parse(args);
  if (!input && !synthetic) throw UsageError("trace needs --input or --synthetic");

  OutputRecord rec;
  rec.command = "trace";
  rec.seed = seed;
  KeyStream stream;
  if (input) {
    rec.param("input", *input);
    stream = read_keys(*input, parse_key_format(key_format),
                       keep_duplicates ? DuplicatePolicy::kDisambiguate
                                       : DuplicatePolicy::kDeduplicate);
  } else {
    rec.param("synthetic", static_cast<std::int64_t>(*synthetic));
    stream = synthetic_keys(*synthetic, seed);
  }
  rec.param("m", static_cast<std::int64_t>(m));
  rec.param("d", static_cast<std::int64_t>(d));
  rec.param("repeats", static_cast<std::int64_t>(repeats));
  TraceConfig cfg;
  cfg.m = m;
  cfg.d = d;
  cfg.repeats = repeats;
  cfg.base_seed = seed;
  cfg.stash_limit = stash_limit;
  cfg.threads = threads_from_env();
  if (beta) {
    if (d != 2) throw UsageError("--beta needs --d 2");
    rec.param("beta", *beta);
    const double b = snap_beta(*beta, m, round, rec);
    const std::uint64_t up = up_bank_size(m, b);
    if (up == 0 || up == m) throw UsageError("--beta must leave both banks non-empty");
    cfg.partition_boundary = static_cast<std::uint32_t>(up);
  }
  const TraceReport r = run_trace_experiment(stream, cfg);
  rec.result("n", static_cast<std::int64_t>(r.n));
  rec.result("overflow_mean", r.overflow_mean);
  rec.result("overflow_min", r.overflow_min);
  rec.result("overflow_max", r.overflow_max);
  rec.result("inserted_mean", r.inserted_mean);
  rec.result("placed_mean", r.placed_mean);
  rec.result("placed_std_error", r.placed_std_error);
  rec.result("duplicates_rejected", static_cast<std::int64_t>(r.duplicates_rejected));
  if (stash_limit) rec.result("stash_overflows", static_cast<std::int64_t>(r.stash_overflows));
  return rec;
}

OutputRecord cmd_concentration(Invocation& inv, const std::vector<std::string>& args) {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  double lambda = 2.0;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 1;
  ModelFlags f;
  inv.app.add_option("--n", n, "elements")->required();
  inv.app.add_option("--m", m, "bins")->required();
  inv.app.add_option("--lambda", lambda, "deviation in units of sqrt(n)")->required();
  inv.app.add_option("--trials", trials, "random graphs (>= 100)");
  inv.app.add_option("--seed", seed, "generator seed");
  f.add_to(inv.app, {"d2", "mixed-det", "mixed-rand", "partitioned"});
  inv.parse(args);

  OutputRecord rec;
  rec.command = "concentration";
  rec.seed = seed;
  rec.param("n", static_cast<std::int64_t>(n));
  rec.param("m", static_cast<std::int64_t>(m));
  const ModelParams params = finite_model(f, n, m, rec);
  rec.param("lambda", lambda);
  rec.param("trials", static_cast<std::int64_t>(trials));
  const ConcentrationOutcome c =
      concentration_experiment(params, trials, lambda, seed, threads_from_env());
  rec.result("empirical_fraction", c.empirical_fraction);
  rec.result("bound", c.bound);
  rec.result("mu_exact", c.mu_exact);
  rec.result("exceedances", static_cast<std::int64_t>(c.exceedances));
  return rec;
}

using Command = std::function<OutputRecord(Invocation&, const std::vector<std::string>&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"exact", cmd_exact},
      {"asymptotic", cmd_asymptotic},
      {"simulate", cmd_simulate},
      {"stash-size", cmd_stash_size},
      {"trace", cmd_trace},
      {"concentration", cmd_concentration},
  };
  return table;
}

OutputRecord run_one(const std::string& name, const std::vector<std::string>& args,
                     std::string& format) {
  const auto it = commands().find(name);
  if (it == commands().end()) throw UsageError("unknown command '" + name + "'");
  Invocation inv(name);
  OutputRecord rec = it->second(inv, args);
  format = inv.format;
  return rec;
}

struct SweepRange {
  std::string param;
  double start = 0;
  double stop = 0;
  double step = 0;
};

std::optional<SweepRange> parse_range(const std::string& param, const std::string& text) {
  static const std::regex range(R"(^([^:]+):([^:]+):([^:]+)$)");
  std::smatch match;
  if (!std::regex_match(text, match, range)) return std::nullopt;
  SweepRange r;
  r.param = param;
  try {
    std::size_t used = 0;
    r.start = std::stod(match[1].str(), &used);
    if (used != match[1].str().size()) return std::nullopt;
    r.stop = std::stod(match[2].str(), &used);
    if (used != match[2].str().size()) return std::nullopt;
    r.step = std::stod(match[3].str(), &used);
    if (used != match[3].str().size()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return r;
}

// Twelve significant digits hide the drift of start + k * step.
std::string grid_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool integer_param(const std::string& p) {
  static const std::vector<std::string> names = {"n",      "m",         "trials",  "d",
                                                 "repeats", "synthetic", "seed", "stash-limit"};
  return std::find(names.begin(), names.end(), p) != names.end();
}

int run_sweep(std::vector<std::string> args, std::ostream& out) {
  std::string command;
  if (!args.empty() && args.front().rfind("--", 0) != 0) {
    command = args.front();
    args.erase(args.begin());
  }
  std::optional<SweepRange> range;
  std::string format = "csv";
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const bool has_value = i + 1 < args.size();
    if (a == "--sweep" && has_value) {
      const std::string& text = args[++i];
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw UsageError("--sweep expects PARAM=start:stop:step");
      range = parse_range(text.substr(0, eq), text.substr(eq + 1));
      if (!range) throw UsageError("--sweep expects PARAM=start:stop:step");
    } else if (a == "--format" && has_value) {
      format = args[++i];
      if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
    } else if (a.rfind("--", 0) == 0 && has_value) {
      if (auto r = parse_range(a.substr(2), args[i + 1])) {
        if (range) throw UsageError("sweep accepts a single swept parameter");
        range = r;
        ++i;
      } else {
        rest.push_back(a);
      }
    } else {
      rest.push_back(a);
    }
  }
  if (!range) throw UsageError("sweep needs --sweep PARAM=start:stop:step or --PARAM start:stop:step");
  if (!(range->step > 0.0) || range->stop < range->start) {
    throw UsageError("sweep range needs step > 0 and stop >= start");
  }
  if (command.empty()) {
    const bool alpha = range->param == "alpha" ||
                       std::find(rest.begin(), rest.end(), "--alpha") != rest.end();
    command = alpha ? "asymptotic" : "exact";
  }
  const auto count =
      static_cast<std::size_t>(std::floor((range->stop - range->start) / range->step + 1e-6)) + 1;
  if (count > 1000000) throw UsageError("sweep grid too large");
  std::vector<OutputRecord> records;
  for (std::size_t k = 0; k < count; ++k) {
    double value = range->start + static_cast<double>(k) * range->step;
    if (integer_param(range->param)) value = std::round(value);
    std::vector<std::string> point = rest;
    point.push_back("--" + range->param);
    point.push_back(integer_param(range->param)
                        ? std::to_string(static_cast<long long>(value))
                        : grid_text(value));
    std::string ignored;
    records.push_back(run_one(command, point, ignored));
  }
  if (format == "json") {
    write_json(out, records);
  } else {
    write_csv(out, records);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args.front() == "--help" || args.front() == "-h") {
    (args.empty() ? err : out) << kUsage;
    return args.empty() ? 2 : 0;
  }
  const std::string& name = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    if (name == "sweep") return run_sweep(rest, out);
    std::string format;
    const OutputRecord rec = run_one(name, rest, format);
    const std::vector<OutputRecord> records{rec};
    if (format == "csv") {
      write_csv(out, records);
    } else {
      write_json(out, records);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    Invocation inv(name);
    out << "see 'cuckoo_lab " << name << "' flags: " << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cuckoo_lab::cli
