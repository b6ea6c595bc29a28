#pragma once

// Closed-integral evaluation of mode probabilities, outage, ergodic rate,
// load per BS and minimum user rate for the four association schemes.

#include <stdexcept>

#include "lactc/model.hpp"
#include "lactc/quadrature.hpp"

namespace lactc::analytic {

using quad::QuadratureSettings;

/// outage_comp / rate of the CoMP mode requested with beta = 1.
class CompModeEmpty : public std::domain_error {
 public:
  CompModeEmpty() : std::domain_error("CoMP mode is empty when beta = 1 (0 dB)") {}
};

/// Load per BS requested for a tier with zero intensity.
class ZeroIntensity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tier serves no users, so the per-user rate of that tier is undefined.
class DegenerateTier : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Interference tail integral F(y, alpha) = ∫_y^∞ u / (1 + u^alpha) du.

/// Uses 0.5·atan(1/y^2) at alpha = 4 and f_interference_numeric otherwise.
/// Throws std::domain_error for alpha <= 2 or y < 0.
double f_interference(double y, double alpha);

/// Quadrature-only evaluation, valid for every alpha > 2.
double f_interference_numeric(double y, double alpha,
                              const QuadratureSettings& settings = {1e-13, 1e-15, 2000});

/// F(0, alpha) = (pi/alpha) / sin(2 pi/alpha).
double f_interference_at_zero(double alpha);

// ---------------------------------------------------------------------------
// Distances and mode probabilities.

/// Nearest-point distance density of a PPP of the given intensity.
double nearest_distance_pdf(double r, double intensity);

/// Density of the distance to the serving macro BS of a non-CoMP macro user.
double distance_pdf_macro(double r, const NetworkConfig& config, double q_macro);
/// Density of the distance to the serving pico BS of a non-CoMP pico user.
double distance_pdf_pico(double r, const NetworkConfig& config, double q_pico);
/// Joint density of (r1, r2) for a CoMP user; zero outside the CoMP region.
double distance_pdf_comp(double r1, double r2, const NetworkConfig& config, double q_comp);
/// Pico-user distance density under range expansion with bias beta.
double distance_pdf_pico_biased(double r, const NetworkConfig& config, double q_pico_biased);

/// The set of (r1, r2) that puts the typical user in CoMP mode. Requires beta > 1.
quad::CompRegion comp_region(const NetworkConfig& config);

/// Mean nearest-BS distances, used to shape the semi-infinite maps.
quad::LengthScales length_scales(const NetworkConfig& config);

/// Closed form for alpha1 == alpha2 (throws std::domain_error otherwise).
ModeProbabilities mode_probabilities_closed_form(const NetworkConfig& config);
/// Semi-infinite quadrature of the q_M and q_P integrals; q_C = 1 - q_M - q_P.
ModeProbabilities mode_probabilities_quadrature(const NetworkConfig& config,
                                                const QuadratureSettings& settings = {});
/// Closed form when the path-loss exponents match, quadrature otherwise.
ModeProbabilities mode_probabilities(const NetworkConfig& config,
                                     const QuadratureSettings& settings = {});

/// Mode weights a scheme actually uses (RE merges CoMP users into the pico
/// group, FC puts everyone in CoMP, Tr evaluates at beta = 1).
ModeProbabilities scheme_mode_weights(Scheme scheme, const NetworkConfig& config,
                                      const QuadratureSettings& settings = {});

// ---------------------------------------------------------------------------
// Laplace transforms of the interference.

/// Ratio a_ij in the exclusion radius of interfering tier j seen by a user
/// served by tier i. beta for (macro, pico); 1/beta for (pico, macro) under
/// range expansion; 1 otherwise.
double exclusion_ratio(Tier serving, Tier interferer, Scheme scheme, double beta);

/// L_{I_j}(tau r^{alpha_i} / P_i) for a single-BS user at distance r from its
/// serving tier-i BS.
double laplace_noncomp(Tier interferer, Tier serving, double distance, double tau, double a_ij,
                       const NetworkConfig& config);

/// L*_{I_j}(s) with interferers of tier j outside the guard radius.
double laplace_comp(Tier interferer, double s, double guard_radius, const NetworkConfig& config);

// ---------------------------------------------------------------------------
// Outage. Each call evaluates at config.tau().

double outage_macro(const NetworkConfig& config, const QuadratureSettings& settings = {});
double outage_pico(const NetworkConfig& config, const QuadratureSettings& settings = {});
double outage_comp(const NetworkConfig& config, const QuadratureSettings& settings = {});
/// Pico-user outage under range expansion (biased association).
double outage_pico_range_expansion(const NetworkConfig& config,
                                   const QuadratureSettings& settings = {});
/// Every user served jointly by its nearest macro and pico BS.
double outage_full_cooperation(const NetworkConfig& config,
                               const QuadratureSettings& settings = {});

/// Per-mode values of a scheme; absent when the mode has zero weight.
struct SchemeBreakdown {
  ModeProbabilities weights;
  std::optional<double> macro, pico, comp;
  double overall = 0.0;
};

SchemeBreakdown outage_breakdown(Scheme scheme, const NetworkConfig& config,
                                 const QuadratureSettings& settings = {});
double outage_overall(Scheme scheme, const NetworkConfig& config,
                      const QuadratureSettings& settings = {});

// ---------------------------------------------------------------------------
// Ergodic rate in nats/s/Hz.

/// Rate of one LA-CTC mode: ∫_0^∞ (1 - O_mode(tau = e^t - 1)) dt.
double rate_mode(Mode mode, const NetworkConfig& config, const QuadratureSettings& settings = {});
double rate_pico_range_expansion(const NetworkConfig& config,
                                 const QuadratureSettings& settings = {});
double rate_full_cooperation(const NetworkConfig& config, const QuadratureSettings& settings = {});

SchemeBreakdown rate_breakdown(Scheme scheme, const NetworkConfig& config,
                               const QuadratureSettings& settings = {});
double rate_overall(Scheme scheme, const NetworkConfig& config,
                    const QuadratureSettings& settings = {});

// ---------------------------------------------------------------------------
// Load and minimum rate.

struct BsLoad {
  double macro = 0.0;
  double pico = 0.0;
};

/// Average users per BS of each tier.
BsLoad load_per_bs(Scheme scheme, const NetworkConfig& config,
                   const QuadratureSettings& settings = {});

/// Smaller of the per-tier average user rates.
double min_user_rate(Scheme scheme, const NetworkConfig& config,
                     const QuadratureSettings& settings = {});

// ---------------------------------------------------------------------------

struct MetricSelection {
  bool modes = true;
  bool outage = true;
  bool rate = false;
  bool load = true;
  bool min_rate = false;

  static MetricSelection all() { return {true, true, true, true, true}; }
};

/// Evaluates the selected metrics for one scheme.
MetricsReport analyze(Scheme scheme, const NetworkConfig& config,
                      const MetricSelection& metrics = {},
                      const QuadratureSettings& settings = {});

}  // namespace lactc::analytic
