#include "lactc/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace lactc::io {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 12> kKeys = {
    "macro.power_dbm", "macro.intensity_per_m2", "macro.alpha",  "pico.power_dbm",
    "pico.intensity_per_m2", "pico.alpha",       "noise_dbm",    "beta_db",
    "beta_linear",     "tau_db",                 "user_intensity_per_m2", "$comment"};

double number(const Json& doc, const char* key, double fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) {
    throw ConfigSchemaError(std::string("config key '") + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

NetworkConfig parse_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigReadError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigSchemaError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end()) {
      throw ConfigSchemaError("unknown config key '" + item.key() + "'");
    }
  }
  if (doc.contains("beta_db") && doc.contains("beta_linear")) {
    throw ConfigSchemaError("give either beta_db or beta_linear, not both");
  }

  const auto d = NetworkConfig::defaults();
  const TierParams macro(number(doc, "macro.power_dbm", d.macro().power_dbm()),
                         number(doc, "macro.intensity_per_m2", d.macro().intensity()),
                         number(doc, "macro.alpha", d.macro().pathloss_exponent()));
  const TierParams pico(number(doc, "pico.power_dbm", d.pico().power_dbm()),
                        number(doc, "pico.intensity_per_m2", d.pico().intensity()),
                        number(doc, "pico.alpha", d.pico().pathloss_exponent()));

  double noise = d.noise_watts();
  if (auto it = doc.find("noise_dbm"); it != doc.end()) {
    if (it->is_null()) {
      noise = 0.0;
    } else if (it->is_number()) {
      noise = dbm_to_watts(it->get<double>());
    } else {
      throw ConfigSchemaError("config key 'noise_dbm' must be a number or null");
    }
  }

  double beta = d.beta();
  if (doc.contains("beta_db")) beta = db_to_linear(number(doc, "beta_db", 0.0));
  if (doc.contains("beta_linear")) beta = number(doc, "beta_linear", 1.0);
  const double tau =
      doc.contains("tau_db") ? db_to_linear(number(doc, "tau_db", 0.0)) : d.tau();

  NetworkConfig config(macro, pico, noise, beta, tau,
                       number(doc, "user_intensity_per_m2", d.user_intensity()));
  validate(config);
  return config;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigReadError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw ConfigReadError("error reading config file '" + path + "'");
  return parse_config(text.str());
}

namespace {

Json config_json(const NetworkConfig& c) {
  Json j;
  j["macro.power_dbm"] = c.macro().power_dbm();
  j["macro.intensity_per_m2"] = c.macro().intensity();
  j["macro.alpha"] = c.macro().pathloss_exponent();
  j["pico.power_dbm"] = c.pico().power_dbm();
  j["pico.intensity_per_m2"] = c.pico().intensity();
  j["pico.alpha"] = c.pico().pathloss_exponent();
  if (c.noise_watts() > 0.0) {
    j["noise_dbm"] = c.noise_dbm();
  } else {
    j["noise_dbm"] = nullptr;
  }
  j["beta_linear"] = c.beta();
  j["tau_db"] = linear_to_db(c.tau());
  j["user_intensity_per_m2"] = c.user_intensity();
  return j;
}

Json fields_json(const MetricsReport::Fields& f) {
  Json j = Json::object();
  for_each_metric_field([&](const char* name, auto member) {
    if (const auto& v = f.*member) j[name] = *v;
  });
  return j;
}

}  // namespace

std::string config_to_json(const NetworkConfig& config, int indent) {
  return config_json(config).dump(indent);
}

std::string report_json(Scheme scheme, std::string_view engine, const NetworkConfig& config,
                        const MetricsReport& report,
                        const std::optional<SimulationEcho>& simulation) {
  Json j;
  j["scheme"] = std::string(to_string(scheme));
  j["engine"] = std::string(engine);
  j["config"] = config_json(config);
  j["metrics"] = fields_json(report.value);
  if (report.ci_half_width) j["ci_half_width"] = fields_json(*report.ci_half_width);
  if (simulation) {
    const auto& s = simulation->settings;
    j["simulation"] = {{"iterations", s.iterations},
                       {"seed", s.seed},
                       {"window_half_width_m", s.window_half_width},
                       {"interference_model", std::string(sim::to_string(s.interference))},
                       {"resamples", simulation->resamples}};
  }
  j["warnings"] = report.warnings;
  return j.dump(2);
}

std::string format_csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
  return std::string(buf.data(), res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_csv_number(r.variable) << ',' << to_string(r.scheme) << ',' << r.metric << ',';
    if (r.value) out << format_csv_number(*r.value);
    out << ',';
    if (r.ci_half_width) out << format_csv_number(*r.ci_half_width);
    out << '\n';
  }
}

}  // namespace lactc::io
