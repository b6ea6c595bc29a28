#include "lactc/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace lactc {

double dbm_to_watts(double dbm) {
  if (std::isinf(dbm) && dbm < 0) return 0.0;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  if (watts <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(watts) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::NonCompMacro: return "macro";
    case Mode::NonCompPico: return "pico";
    case Mode::Comp: return "comp";
  }
  return "?";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::LaCtc: return "lactc";
    case Scheme::RangeExpansion: return "re";
    case Scheme::FullCooperation: return "fc";
    case Scheme::Traditional: return "tr";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  if (s == "lactc" || s == "la_ctc") return Scheme::LaCtc;
  if (s == "re" || s == "range_expansion") return Scheme::RangeExpansion;
  if (s == "fc" || s == "full_cooperation") return Scheme::FullCooperation;
  if (s == "tr" || s == "traditional") return Scheme::Traditional;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

TierParams::TierParams(double power_dbm, double intensity, double pathloss_exponent)
    : power_dbm_(power_dbm),
      power_watts_(dbm_to_watts(power_dbm)),
      intensity_(intensity),
      pathloss_exponent_(pathloss_exponent) {}

NetworkConfig::NetworkConfig() : NetworkConfig(defaults()) {}

NetworkConfig::NetworkConfig(TierParams macro, TierParams pico, double noise_watts, double beta,
                             double tau, double user_intensity)
    : macro_(macro),
      pico_(pico),
      noise_watts_(noise_watts),
      beta_(beta),
      tau_(tau),
      user_intensity_(user_intensity) {}

NetworkConfig NetworkConfig::defaults() {
  const double lambda1 = 1.0 / (500.0 * 500.0 * kPi);
  return NetworkConfig(TierParams(37.0, lambda1, 4.0), TierParams(20.0, 5.0 * lambda1, 4.0),
                       dbm_to_watts(-104.0), db_to_linear(4.0), 1.0, 10.0 * lambda1);
}

NetworkConfig NetworkConfig::with_macro(TierParams t) const {
  auto c = *this;
  c.macro_ = t;
  return c;
}
NetworkConfig NetworkConfig::with_pico(TierParams t) const {
  auto c = *this;
  c.pico_ = t;
  return c;
}
NetworkConfig NetworkConfig::with_noise_watts(double w) const {
  auto c = *this;
  c.noise_watts_ = w;
  return c;
}
NetworkConfig NetworkConfig::with_beta(double b) const {
  auto c = *this;
  c.beta_ = b;
  return c;
}
NetworkConfig NetworkConfig::with_tau(double t) const {
  auto c = *this;
  c.tau_ = t;
  return c;
}
NetworkConfig NetworkConfig::with_user_intensity(double v) const {
  auto c = *this;
  c.user_intensity_ = v;
  return c;
}

std::string_view to_string(ConfigIssue issue) {
  switch (issue) {
    case ConfigIssue::AlphaTooSmall: return "AlphaTooSmall";
    case ConfigIssue::BetaBelowOne: return "BetaBelowOne";
    case ConfigIssue::NonPositiveTau: return "NonPositiveTau";
    case ConfigIssue::NegativeIntensity: return "NegativeIntensity";
    case ConfigIssue::NonFinitePower: return "NonFinitePower";
    case ConfigIssue::NegativeNoise: return "NegativeNoise";
  }
  return "?";
}

namespace {

std::string join(const std::vector<ConfigViolation>& v) {
  std::ostringstream os;
  os << "invalid network config:";
  for (const auto& x : v) os << "\n  " << to_string(x.issue) << ": " << x.detail;
  return os.str();
}

void check_tier(const TierParams& t, const char* name, std::vector<ConfigViolation>& out) {
  const std::string n(name);
  // NaN fails every comparison, so test the valid range.
  if (!(t.pathloss_exponent() > 2.0)) {
    out.push_back({ConfigIssue::AlphaTooSmall,
                   n + ".alpha = " + std::to_string(t.pathloss_exponent()) + " must exceed 2"});
  }
  if (!(t.intensity() >= 0.0) || !std::isfinite(t.intensity())) {
    out.push_back({ConfigIssue::NegativeIntensity,
                   n + ".intensity_per_m2 = " + std::to_string(t.intensity()) +
                       " must be finite and >= 0"});
  }
  if (!std::isfinite(t.power_dbm()) || !(t.power_watts() > 0.0)) {
    out.push_back({ConfigIssue::NonFinitePower, n + ".power_dbm must be finite"});
  }
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<ConfigViolation> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

std::vector<ConfigViolation> check(const NetworkConfig& config) {
  std::vector<ConfigViolation> out;
  check_tier(config.macro(), "macro", out);
  check_tier(config.pico(), "pico", out);
  if (!(config.beta() >= 1.0) || std::isnan(config.beta())) {
    out.push_back({ConfigIssue::BetaBelowOne,
                   "beta = " + std::to_string(config.beta()) + " must be >= 1 (0 dB)"});
  }
  if (!(config.tau() > 0.0) || !std::isfinite(config.tau())) {
    out.push_back({ConfigIssue::NonPositiveTau,
                   "tau = " + std::to_string(config.tau()) + " must be finite and > 0"});
  }
  if (!(config.noise_watts() >= 0.0) || !std::isfinite(config.noise_watts())) {
    out.push_back({ConfigIssue::NegativeNoise, "noise power must be finite and >= 0 W"});
  }
  if (!(config.user_intensity() >= 0.0) || !std::isfinite(config.user_intensity())) {
    out.push_back({ConfigIssue::NegativeIntensity, "user_intensity_per_m2 must be finite and >= 0"});
  }
  return out;
}

const NetworkConfig& validate(const NetworkConfig& config) {
  auto issues = check(config);
  if (!issues.empty()) throw InvalidConfig(std::move(issues));
  return config;
}

double ModeProbabilities::of(Mode m) const {
  switch (m) {
    case Mode::NonCompMacro: return q_macro;
    case Mode::NonCompPico: return q_pico;
    case Mode::Comp: return q_comp;
  }
  return 0.0;
}

bool within_ranges(const MetricsReport::Fields& f) {
  auto prob = [](const std::optional<double>& v) { return !v || (*v >= 0.0 && *v <= 1.0); };
  auto nonneg = [](const std::optional<double>& v) { return !v || *v >= 0.0; };
  return prob(f.q_macro) && prob(f.q_pico) && prob(f.q_comp) && prob(f.outage_macro) &&
         prob(f.outage_pico) && prob(f.outage_comp) && prob(f.overall_outage) &&
         nonneg(f.rate_macro) && nonneg(f.rate_pico) && nonneg(f.rate_comp) &&
         nonneg(f.overall_rate) && nonneg(f.macro_load) && nonneg(f.pico_load) &&
         nonneg(f.min_user_rate);
}

}  // namespace lactc
