#pragma once

// Domain types shared by the analytic and Monte Carlo engines.
//
// All quantities are stored in linear units (watts, BS per square meter,
// linear power ratios). dB and dBm only appear at the I/O boundary.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lactc {

inline constexpr double kPi = 3.14159265358979323846;

/// Converts a power level in dBm to watts. -inf dBm maps to 0 W.
double dbm_to_watts(double dbm);
/// Inverse of dbm_to_watts. 0 W maps to -inf dBm.
double watts_to_dbm(double watts);
/// 10^(db/10).
double db_to_linear(double db);
double linear_to_db(double linear);

enum class Tier { Macro = 0, Pico = 1 };

/// Association mode of the typical user.
enum class Mode { NonCompMacro = 0, NonCompPico = 1, Comp = 2 };

enum class Scheme { LaCtc, RangeExpansion, FullCooperation, Traditional };

inline constexpr std::array<Scheme, 4> kAllSchemes = {
    Scheme::LaCtc, Scheme::RangeExpansion, Scheme::FullCooperation, Scheme::Traditional};

std::string_view to_string(Mode mode);
std::string_view to_string(Scheme scheme);
/// Accepts "lactc", "re", "fc", "tr" and the long names ("la-ctc",
/// "range_expansion", ...). Throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view text);

/// Transmit power, BS intensity and path-loss exponent of one tier.
class TierParams {
 public:
  TierParams() = default;
  TierParams(double power_dbm, double intensity, double pathloss_exponent);

  double power_dbm() const { return power_dbm_; }
  double power_watts() const { return power_watts_; }
  /// BS per square meter.
  double intensity() const { return intensity_; }
  double pathloss_exponent() const { return pathloss_exponent_; }

  TierParams with_power_dbm(double dbm) const { return {dbm, intensity_, pathloss_exponent_}; }
  TierParams with_intensity(double v) const { return {power_dbm_, v, pathloss_exponent_}; }
  TierParams with_pathloss_exponent(double v) const { return {power_dbm_, intensity_, v}; }

  bool operator==(const TierParams&) const = default;

 private:
  double power_dbm_ = 0.0;
  double power_watts_ = 1e-3;
  double intensity_ = 0.0;
  double pathloss_exponent_ = 4.0;
};

/// Both tiers plus receiver noise, cooperation threshold and SINR threshold.
class NetworkConfig {
 public:
  /// Same as defaults().
  NetworkConfig();
  /// noise_watts == 0 selects the interference-limited regime.
  NetworkConfig(TierParams macro, TierParams pico, double noise_watts, double beta, double tau,
                double user_intensity);

  /// The evaluation setup used throughout: P1 = 37 dBm, P2 = 20 dBm,
  /// lambda1 = 1/(500^2 pi), lambda2 = 5 lambda1, lambda_u = 10 lambda1,
  /// alpha1 = alpha2 = 4, noise -104 dBm, beta = 4 dB, tau = 0 dB.
  static NetworkConfig defaults();

  const TierParams& macro() const { return macro_; }
  const TierParams& pico() const { return pico_; }
  const TierParams& tier(Tier t) const { return t == Tier::Macro ? macro_ : pico_; }
  double noise_watts() const { return noise_watts_; }
  double noise_dbm() const { return watts_to_dbm(noise_watts_); }
  /// Cooperation threshold (LA-CTC) or pico bias (range expansion), linear.
  double beta() const { return beta_; }
  /// SINR threshold, linear.
  double tau() const { return tau_; }
  double user_intensity() const { return user_intensity_; }

  NetworkConfig with_macro(TierParams t) const;
  NetworkConfig with_pico(TierParams t) const;
  NetworkConfig with_noise_watts(double w) const;
  NetworkConfig with_beta(double b) const;
  NetworkConfig with_tau(double t) const;
  NetworkConfig with_user_intensity(double v) const;

  bool same_pathloss() const { return macro_.pathloss_exponent() == pico_.pathloss_exponent(); }

  bool operator==(const NetworkConfig&) const = default;

 private:
  TierParams macro_;
  TierParams pico_;
  double noise_watts_ = 0.0;
  double beta_ = 1.0;
  double tau_ = 1.0;
  double user_intensity_ = 0.0;
};

enum class ConfigIssue {
  AlphaTooSmall,
  BetaBelowOne,
  NonPositiveTau,
  NegativeIntensity,
  NonFinitePower,
  NegativeNoise,
};

std::string_view to_string(ConfigIssue issue);

struct ConfigViolation {
  ConfigIssue issue;
  std::string detail;
};

class InvalidConfig : public std::runtime_error {
 public:
  explicit InvalidConfig(std::vector<ConfigViolation> violations);
  const std::vector<ConfigViolation>& violations() const { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

/// Every violated invariant; empty when the config is usable.
std::vector<ConfigViolation> check(const NetworkConfig& config);

/// Returns the config unchanged if it is valid, throws InvalidConfig listing
/// every violation otherwise.
const NetworkConfig& validate(const NetworkConfig& config);

/// Probability that the typical user operates in each mode.
struct ModeProbabilities {
  double q_macro = 0.0;
  double q_pico = 0.0;
  double q_comp = 0.0;

  double of(Mode m) const;
};

/// Per-scheme metrics. Absent fields were not requested or do not apply to
/// the scheme (e.g. no CoMP mode under Traditional). Rates are in nats/s/Hz,
/// loads in users per BS.
struct MetricsReport {
  struct Fields {
    std::optional<double> q_macro, q_pico, q_comp;
    std::optional<double> outage_macro, outage_pico, outage_comp, overall_outage;
    std::optional<double> rate_macro, rate_pico, rate_comp, overall_rate;
    std::optional<double> macro_load, pico_load;
    std::optional<double> min_user_rate;
  };

  Fields value;
  /// 95% confidence half-widths, simulation only.
  std::optional<Fields> ci_half_width;
  std::vector<std::string> warnings;
};

/// Visits every field as (name, member pointer) in a fixed order.
template <typename F>
void for_each_metric_field(F&& f) {
  using M = MetricsReport::Fields;
  f("q_macro", &M::q_macro);
  f("q_pico", &M::q_pico);
  f("q_comp", &M::q_comp);
  f("outage_macro", &M::outage_macro);
  f("outage_pico", &M::outage_pico);
  f("outage_comp", &M::outage_comp);
  f("overall_outage", &M::overall_outage);
  f("rate_macro", &M::rate_macro);
  f("rate_pico", &M::rate_pico);
  f("rate_comp", &M::rate_comp);
  f("overall_rate", &M::overall_rate);
  f("macro_load", &M::macro_load);
  f("pico_load", &M::pico_load);
  f("min_user_rate", &M::min_user_rate);
}

/// Range checks on a report: probabilities in [0,1], rates and loads >= 0.
bool within_ranges(const MetricsReport::Fields& f);

}  // namespace lactc
