#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "lactc/analytic.hpp"
#include "lactc/report.hpp"
#include "lactc/simulator.hpp"

namespace lactc::cli {

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

struct CommonFlags {
  std::string config_path;
  std::string scheme = "lactc";
  std::optional<double> beta_db;
  std::optional<double> tau_db;
  std::string output;
};

struct SimFlags {
  std::uint64_t iterations = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double window_km = 10.0;
  std::string interference = "independent";

  sim::SimSettings settings() const {
    sim::SimSettings s;
    s.iterations = iterations;
    s.seed = seed;
    s.workers = workers;
    s.window_half_width = window_km * 500.0;
    s.interference = sim::parse_interference_model(interference);
    s.check();
    return s;
  }
};

struct SweepFlags {
  std::string variable = "beta_db";
  std::string values;
  std::string schemes = "lactc";
  std::string metrics = "overall_outage";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON config file (defaults when omitted)");
  cmd->add_option("--beta-db", f.beta_db, "override the cooperation threshold / bias in dB");
  cmd->add_option("--tau-db", f.tau_db, "override the SINR threshold in dB");
  cmd->add_option("-o,--output", f.output, "write the result here instead of stdout");
}

void add_sim(CLI::App* cmd, SimFlags& f) {
  cmd->add_option("--iterations", f.iterations, "Monte Carlo iterations")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--workers", f.workers, "worker threads (wall time only)")->capture_default_str();
  cmd->add_option("--window-km", f.window_km, "side of the square deployment window in km")
      ->capture_default_str();
  cmd->add_option("--interference-model", f.interference, "independent | coherent-pairs")
      ->capture_default_str();
}

void add_sweep(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--variable", f.variable,
                  "beta_db | tau_db | pico_intensity_ratio | alpha1 | alpha2")
      ->capture_default_str();
  cmd->add_option("--values", f.values, "comma list, or start:stop:count")->required();
  cmd->add_option("--schemes", f.schemes, "comma list of lactc, re, fc, tr, or all")
      ->capture_default_str();
  cmd->add_option("--metrics", f.metrics, "comma list of report field names")
      ->capture_default_str();
}

NetworkConfig resolve_config(const CommonFlags& f, std::ostream& err) {
  auto config = f.config_path.empty() ? NetworkConfig::defaults() : io::load_config(f.config_path);
  if (f.beta_db) config = config.with_beta(db_to_linear(*f.beta_db));
  if (f.tau_db) config = config.with_tau(db_to_linear(*f.tau_db));
  validate(config);
  err << "lactc: config " << io::config_to_json(config) << '\n';
  return config;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> out;
  for (const auto& s : split(text)) {
    if (s == "all") {
      out.insert(out.end(), kAllSchemes.begin(), kAllSchemes.end());
    } else {
      out.push_back(parse_scheme(s));
    }
  }
  if (out.empty()) throw UsageError("no schemes given");
  return out;
}

using FieldPtr = std::optional<double> MetricsReport::Fields::*;

const std::map<std::string, FieldPtr>& field_table() {
  static const auto table = [] {
    std::map<std::string, FieldPtr> t;
    for_each_metric_field([&](const char* name, FieldPtr p) { t[name] = p; });
    return t;
  }();
  return table;
}

std::vector<std::string> parse_fields(const std::string& text) {
  auto names = split(text);
  for (const auto& n : names) {
    if (!field_table().count(n)) throw UsageError("unknown metric '" + n + "'");
  }
  return names;
}

analytic::MetricSelection selection_for(const std::vector<std::string>& fields) {
  analytic::MetricSelection sel{false, false, false, false, false};
  for (const auto& f : fields) {
    if (f.rfind("q_", 0) == 0) sel.modes = true;
    if (f.find("outage") != std::string::npos) sel.outage = true;
    if (f.rfind("rate_", 0) == 0 || f == "overall_rate") sel.rate = true;
    if (f.find("_load") != std::string::npos) sel.load = true;
    if (f == "min_user_rate") sel.min_rate = true;
  }
  return sel;
}

analytic::MetricSelection parse_metric_groups(const std::string& text) {
  analytic::MetricSelection sel{false, false, false, false, false};
  for (const auto& g : split(text)) {
    if (g == "all") {
      sel = analytic::MetricSelection::all();
    } else if (g == "modes") {
      sel.modes = true;
    } else if (g == "outage") {
      sel.outage = true;
    } else if (g == "rate") {
      sel.rate = true;
    } else if (g == "load") {
      sel.load = true;
    } else if (g == "min_rate") {
      sel.min_rate = true;
    } else {
      throw UsageError("unknown metric group '" + g + "' (modes, outage, rate, load, min_rate, all)");
    }
  }
  return sel;
}

// Writes to --output when given, else to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw OutputError("cannot open output file '" + path + "'");
  file << text;
  if (!file) throw OutputError("error writing output file '" + path + "'");
}

constexpr double kZ95 = 1.959963984540054;

int cmd_analyze(const CommonFlags& common, const std::string& metrics, std::ostream& out,
                std::ostream& err) {
  const auto config = resolve_config(common, err);
  const auto scheme = parse_scheme(common.scheme);
  const auto report = analytic::analyze(scheme, config, parse_metric_groups(metrics));
  emit(common.output, out, io::report_json(scheme, "analytic", config, report) + "\n");
  return kOk;
}

int cmd_simulate(const CommonFlags& common, const SimFlags& flags, std::ostream& out,
                 std::ostream& err) {
  const auto config = resolve_config(common, err);
  const auto scheme = parse_scheme(common.scheme);
  const auto settings = flags.settings();
  const auto result = sim::simulate(scheme, config, settings);
  const io::SimulationEcho echo{settings, result.resamples};
  emit(common.output, out,
       io::report_json(scheme, "simulation", config, result.to_report(), echo) + "\n");
  return kOk;
}

int cmd_sweep(const CommonFlags& common, const SweepFlags& sweep, const SimFlags& flags,
              const std::string& engine, std::ostream& out, std::ostream& err) {
  const auto base = resolve_config(common, err);
  const auto variable = parse_sweep_variable(sweep.variable);
  const auto grid = parse_grid(sweep.values);
  const auto schemes = parse_schemes(sweep.schemes);
  const auto fields = parse_fields(sweep.metrics);
  if (engine != "analytic" && engine != "simulation") {
    throw UsageError("engine must be analytic or simulation");
  }
  const auto settings = flags.settings();

  std::vector<io::SweepRow> rows;
  if (!fields.empty()) {
    for (double x : grid) {
      const auto config = apply_sweep(base, variable, x);
      for (Scheme scheme : schemes) {
        MetricsReport report;
        if (engine == "analytic") {
          report = analytic::analyze(scheme, config, selection_for(fields));
        } else {
          report = sim::simulate(scheme, config, settings).to_report();
        }
        for (const auto& name : fields) {
          const auto member = field_table().at(name);
          io::SweepRow row{x, scheme, name, report.value.*member, std::nullopt};
          if (report.ci_half_width) row.ci_half_width = (*report.ci_half_width).*member;
          rows.push_back(row);
        }
      }
    }
  }
  std::ostringstream csv;
  io::write_sweep_csv(csv, rows);
  emit(common.output, out, csv.str());
  return kOk;
}

int cmd_validate(const CommonFlags& common, const SweepFlags& sweep, const SimFlags& flags,
                 double tolerance_sigma, std::ostream& out, std::ostream& err) {
  const auto base = resolve_config(common, err);
  const auto variable = parse_sweep_variable(sweep.variable);
  const auto grid = parse_grid(sweep.values);
  const auto schemes = parse_schemes(sweep.schemes);
  const auto fields = parse_fields(sweep.metrics);
  if (!(tolerance_sigma > 0.0)) throw UsageError("tolerance sigma must be > 0");
  const auto settings = flags.settings();

  std::ostringstream csv;
  csv << "variable,scheme,metric,analytic,simulated,ci_half_width,deviation_sigma,verdict\n";
  int checked = 0;
  int failed = 0;
  for (double x : grid) {
    const auto config = apply_sweep(base, variable, x);
    for (Scheme scheme : schemes) {
      const auto a = analytic::analyze(scheme, config, selection_for(fields));
      const auto s = sim::simulate(scheme, config, settings).to_report();
      for (const auto& name : fields) {
        const auto member = field_table().at(name);
        const auto av = a.value.*member;
        const auto sv = s.value.*member;
        csv << io::format_csv_number(x) << ',' << to_string(scheme) << ',' << name << ',';
        if (!av || !sv) {
          csv << (av ? io::format_csv_number(*av) : "") << ','
              << (sv ? io::format_csv_number(*sv) : "") << ",,,skipped\n";
          continue;
        }
        const double half = ((*s.ci_half_width).*member).value_or(0.0);
        const double sigma = half / kZ95;
        const double diff = std::abs(*av - *sv);
        const bool pass = sigma > 0.0 ? diff <= tolerance_sigma * sigma : diff <= 1e-12;
        ++checked;
        if (!pass) ++failed;
        csv << io::format_csv_number(*av) << ',' << io::format_csv_number(*sv) << ','
            << io::format_csv_number(half) << ','
            << (sigma > 0.0 ? io::format_csv_number(diff / sigma) : "") << ','
            << (pass ? "pass" : "fail") << '\n';
      }
    }
  }
  emit(common.output, out, csv.str());
  err << "lactc: validate " << (checked - failed) << "/" << checked << " checks within "
      << tolerance_sigma << " sigma\n";
  return failed == 0 ? kOk : kCrossCheckFailed;
}

}  // namespace

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "beta_db") return SweepVariable::BetaDb;
  if (name == "tau_db") return SweepVariable::TauDb;
  if (name == "pico_intensity_ratio") return SweepVariable::PicoIntensityRatio;
  if (name == "alpha1") return SweepVariable::Alpha1;
  if (name == "alpha2") return SweepVariable::Alpha2;
  throw UsageError("unknown sweep variable '" + name + "'");
}

NetworkConfig apply_sweep(const NetworkConfig& base, SweepVariable variable, double value) {
  NetworkConfig c = base;
  switch (variable) {
    case SweepVariable::BetaDb: c = base.with_beta(db_to_linear(value)); break;
    case SweepVariable::TauDb: c = base.with_tau(db_to_linear(value)); break;
    case SweepVariable::PicoIntensityRatio:
      c = base.with_pico(base.pico().with_intensity(value * base.macro().intensity()));
      break;
    case SweepVariable::Alpha1:
      c = base.with_macro(base.macro().with_pathloss_exponent(value));
      break;
    case SweepVariable::Alpha2:
      c = base.with_pico(base.pico().with_pathloss_exponent(value));
      break;
  }
  validate(c);
  return c;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("grid must be start:stop:count");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double count = to_double(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count)) {
      throw UsageError("grid count must be a positive integer");
    }
    const auto n = static_cast<int>(count);
    for (int k = 0; k < n; ++k) {
      out.push_back(n == 1 ? start : start + (stop - start) * k / (n - 1));
    }
  } else {
    for (const auto& v : split(text)) out.push_back(to_double(v));
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-tier HetNet outage, rate and load under LA-CTC, RE, FC and Tr", "lactc"};
  app.require_subcommand(1);

  CommonFlags common;
  SimFlags sim_flags;
  SweepFlags sweep_flags;
  std::string metric_groups = "all";
  std::string engine = "analytic";
  double tolerance_sigma = 3.0;

  auto* analyze = app.add_subcommand("analyze", "closed-integral evaluation of one scheme");
  add_common(analyze, common);
  analyze->add_option("-s,--scheme", common.scheme, "lactc | re | fc | tr")->capture_default_str();
  analyze->add_option("--metrics", metric_groups, "modes, outage, rate, load, min_rate or all")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of one scheme");
  add_common(simulate, common);
  simulate->add_option("-s,--scheme", common.scheme, "lactc | re | fc | tr")->capture_default_str();
  add_sim(simulate, sim_flags);

  auto* validate_cmd = app.add_subcommand("validate", "analytic vs Monte Carlo over a sweep");
  add_common(validate_cmd, common);
  add_sweep(validate_cmd, sweep_flags);
  add_sim(validate_cmd, sim_flags);
  validate_cmd->add_option("--tolerance-sigma", tolerance_sigma, "allowed deviation in CI sigmas")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "CSV of metrics over a parameter grid");
  add_common(sweep, common);
  add_sweep(sweep, sweep_flags);
  add_sim(sweep, sim_flags);
  sweep->add_option("--engine", engine, "analytic | simulation")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (*analyze) return cmd_analyze(common, metric_groups, out, err);
    if (*simulate) return cmd_simulate(common, sim_flags, out, err);
    if (*validate_cmd) {
      return cmd_validate(common, sweep_flags, sim_flags, tolerance_sigma, out, err);
    }
    if (*sweep) return cmd_sweep(common, sweep_flags, sim_flags, engine, out, err);
  } catch (const io::ConfigReadError& e) {
    err << "lactc: " << e.what() << '\n';
    return kIoError;
  } catch (const OutputError& e) {
    err << "lactc: " << e.what() << '\n';
    return kIoError;
  } catch (const io::ConfigSchemaError& e) {
    err << "lactc: " << e.what() << '\n';
    return kValidationError;
  } catch (const InvalidConfig& e) {
    err << "lactc: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "lactc: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "lactc: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kValidationError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("lactc");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lactc::cli
