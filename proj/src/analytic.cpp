#include "lactc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lactc::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Tier other_tier(Tier t) { return t == Tier::Macro ? Tier::Pico : Tier::Macro; }

double alpha_of(const NetworkConfig& c, Tier t) { return c.tier(t).pathloss_exponent(); }
double power_of(const NetworkConfig& c, Tier t) { return c.tier(t).power_watts(); }
double lambda_of(const NetworkConfig& c, Tier t) { return c.tier(t).intensity(); }

void require(const quad::QuadratureResult& r, const char* what) {
  if (!r.converged()) {
    throw quad::NumericalError(std::string(what) + ": quadrature did not converge (estimate " +
                               std::to_string(r.value) + " +- " + std::to_string(r.error) + ")");
  }
}

double combined_scale(const NetworkConfig& c) {
  const double lambda = c.macro().intensity() + c.pico().intensity();
  return lambda > 0.0 ? 1.0 / std::sqrt(kPi * lambda) : 1.0;
}

// Unnormalized density of the serving distance r for a user served by tier i
// whose strongest tier-j BS satisfies P_i r^{-a_i} >= ratio * P_j r_j^{-a_j}.
// The mass of this density is the probability of that association event.
struct LinkDensity {
  double two_pi_lambda_i;
  double own;        // pi lambda_i
  double other;      // pi lambda_j (ratio P_j / P_i)^{2/a_j}
  double other_exp;  // 2 a_i / a_j

  LinkDensity(const NetworkConfig& c, Tier i, double ratio) {
    const Tier j = other_tier(i);
    const double aj = alpha_of(c, j);
    two_pi_lambda_i = 2.0 * kPi * lambda_of(c, i);
    own = kPi * lambda_of(c, i);
    other = kPi * lambda_of(c, j) *
            std::pow(ratio * power_of(c, j) / power_of(c, i), 2.0 / aj);
    other_exp = 2.0 * alpha_of(c, i) / aj;
  }

  double operator()(double r) const {
    if (r <= 0.0) return 0.0;
    return two_pi_lambda_i * r * std::exp(-own * r * r - other * std::pow(r, other_exp));
  }
};

double link_mass(const NetworkConfig& c, Tier i, double ratio, const QuadratureSettings& s) {
  if (lambda_of(c, i) == 0.0) return 0.0;
  const LinkDensity density(c, i, ratio);
  auto res = quad::integrate_semi_infinite(density, 0.0, s, combined_scale(c));
  require(res, "association probability");
  return res.value;
}

// 2 pi lambda_j (tau P_j / P_i)^{2/a_j} F((a_ij / tau)^{1/a_j}, a_j); the
// log-Laplace transform of tier-j interference is this times -r^{2 a_i / a_j}.
double noncomp_laplace_coef(Tier j, Tier i, double tau, double a_ij, const NetworkConfig& c) {
  const double lambda = lambda_of(c, j);
  if (lambda == 0.0 || tau <= 0.0) return 0.0;
  const double aj = alpha_of(c, j);
  return 2.0 * kPi * lambda * std::pow(tau * power_of(c, j) / power_of(c, i), 2.0 / aj) *
         f_interference(std::pow(a_ij / tau, 1.0 / aj), aj);
}

// -log L*_{I_j}(s) with interferers beyond guard.
double comp_laplace_exponent(Tier j, double s, double guard, const NetworkConfig& c) {
  const double lambda = lambda_of(c, j);
  if (lambda == 0.0 || s <= 0.0) return 0.0;
  const double aj = alpha_of(c, j);
  const double sp = s * power_of(c, j);
  return 2.0 * kPi * lambda * std::pow(sp, 2.0 / aj) *
         f_interference(std::pow(sp, -1.0 / aj) * guard, aj);
}

// P[SINR > tau] for users served by a single BS of tier i, averaged over the
// conditional serving distance. The normalizer is the mass of the same
// density, so the conditional PDF integrates to one by construction.
class NonCompCoverage {
 public:
  NonCompCoverage(const NetworkConfig& c, Tier serving, double ratio, const QuadratureSettings& s)
      : config_(c), serving_(serving), ratio_(ratio), settings_(s), density_(c, serving, ratio) {
    mass_ = link_mass(c, serving, ratio, s);
    if (!(mass_ > 0.0)) {
      throw DegenerateTier(std::string("no users in the ") +
                           (serving == Tier::Macro ? "macro" : "pico") + " single-BS mode");
    }
  }

  double mass() const { return mass_; }

  double operator()(double tau) const {
    if (tau <= 0.0) return 1.0;
    const Tier i = serving_;
    const Tier j = other_tier(i);
    const double ai = alpha_of(config_, i);
    const double own_coef = noncomp_laplace_coef(i, i, tau, 1.0, config_);
    const double other_coef = noncomp_laplace_coef(j, i, tau, ratio_, config_);
    const double other_exp = 2.0 * ai / alpha_of(config_, j);
    const double noise_coef = tau * config_.noise_watts() / power_of(config_, i);
    const auto integrand = [&](double r) {
      const double base = density_(r);
      if (base == 0.0) return 0.0;
      double e = own_coef * r * r + other_coef * std::pow(r, other_exp);
      if (noise_coef > 0.0) e += noise_coef * std::pow(r, ai);
      return base * std::exp(-e);
    };
    // Large tau concentrates the integrand at r ~ 1/sqrt(own + own_coef).
    const double near = 1.0 / std::sqrt(density_.own + own_coef);
    auto res = quad::integrate_semi_infinite_split(integrand, 0.0, near, settings_,
                                                   combined_scale(config_));
    require(res, "single-BS coverage");
    return std::clamp(res.value / mass_, 0.0, 1.0);
  }

 private:
  NetworkConfig config_;
  Tier serving_;
  double ratio_;
  QuadratureSettings settings_;
  LinkDensity density_;
  double mass_ = 0.0;
};

// exp(-s sigma^2) L*_1(s) L*_2(s), s = tau / (P1 r1^{-a1} + P2 r2^{-a2}).
double joint_transmission_kernel(double r1, double r2, double tau, const NetworkConfig& c) {
  const double signal = c.macro().power_watts() * std::pow(r1, -c.macro().pathloss_exponent()) +
                        c.pico().power_watts() * std::pow(r2, -c.pico().pathloss_exponent());
  const double s = tau / signal;
  const double e = s * c.noise_watts() + comp_laplace_exponent(Tier::Macro, s, r1, c) +
                   comp_laplace_exponent(Tier::Pico, s, r2, c);
  return std::exp(-e);
}

// At large tau only users very close to a BS are covered; the near scales
// resolve that peak while the regular scales keep the bulk.
quad::LengthScales scales_at(const NetworkConfig& c, double tau) {
  auto s = length_scales(c);
  s.r1_near = s.r1 * std::pow(1.0 + tau, -1.0 / c.macro().pathloss_exponent());
  s.r2_near = s.r2 * std::pow(1.0 + tau, -1.0 / c.pico().pathloss_exponent());
  return s;
}

double joint_density_unnormalized(double r1, double r2, const NetworkConfig& c) {
  const double l1 = c.macro().intensity();
  const double l2 = c.pico().intensity();
  return 4.0 * kPi * kPi * l1 * l2 * r1 * r2 * std::exp(-kPi * (l1 * r1 * r1 + l2 * r2 * r2));
}

class CompCoverage {
 public:
  CompCoverage(const NetworkConfig& c, const QuadratureSettings& s)
      : config_(c), settings_(s), region_(comp_region(c)), scales_(length_scales(c)) {
    auto res = quad::integrate_comp_region(
        [&](double r1, double r2) { return joint_density_unnormalized(r1, r2, config_); }, region_,
        settings_, scales_);
    require(res, "CoMP probability");
    mass_ = res.value;
    if (!(mass_ > 0.0)) throw DegenerateTier("no users in the CoMP mode");
  }

  double operator()(double tau) const {
    if (tau <= 0.0) return 1.0;
    auto res = quad::integrate_comp_region(
        [&](double r1, double r2) {
          const double base = joint_density_unnormalized(r1, r2, config_);
          if (base == 0.0) return 0.0;
          return base * joint_transmission_kernel(r1, r2, tau, config_);
        },
        region_, settings_, scales_at(config_, tau));
    require(res, "CoMP coverage");
    return std::clamp(res.value / mass_, 0.0, 1.0);
  }

 private:
  NetworkConfig config_;
  QuadratureSettings settings_;
  quad::CompRegion region_;
  quad::LengthScales scales_;
  double mass_ = 0.0;
};

class FullCooperationCoverage {
 public:
  FullCooperationCoverage(const NetworkConfig& c, const QuadratureSettings& s)
      : config_(c), settings_(s) {
    if (!(c.macro().intensity() > 0.0) || !(c.pico().intensity() > 0.0)) {
      throw DegenerateTier("full cooperation needs BSs in both tiers");
    }
  }

  double operator()(double tau) const {
    if (tau <= 0.0) return 1.0;
    const double l1 = config_.macro().intensity();
    const double l2 = config_.pico().intensity();
    auto res = quad::integrate_first_quadrant(
        [&](double r1, double r2) {
          const double base = nearest_distance_pdf(r1, l1) * nearest_distance_pdf(r2, l2);
          if (base == 0.0) return 0.0;
          return base * joint_transmission_kernel(r1, r2, tau, config_);
        },
        settings_, scales_at(config_, tau));
    require(res, "full-cooperation coverage");
    return std::clamp(res.value, 0.0, 1.0);
  }

 private:
  NetworkConfig config_;
  QuadratureSettings settings_;
};

// The coverage functor must have been built with quad::tighter(s).
template <typename Coverage>
double ergodic_rate(const Coverage& coverage, const QuadratureSettings& s) {
  auto res = quad::integrate_rate([&](double t) { return coverage(std::expm1(t)); }, s);
  if (!res.converged()) {
    throw quad::NumericalError("rate integral did not converge (estimate " +
                               std::to_string(res.value) + ")");
  }
  return res.value;
}

NonCompCoverage macro_link(const NetworkConfig& c, const QuadratureSettings& s) {
  return NonCompCoverage(c, Tier::Macro, c.beta(), s);
}
NonCompCoverage pico_link(const NetworkConfig& c, const QuadratureSettings& s) {
  return NonCompCoverage(c, Tier::Pico, 1.0, s);
}
NonCompCoverage pico_link_biased(const NetworkConfig& c, const QuadratureSettings& s) {
  return NonCompCoverage(c, Tier::Pico, 1.0 / c.beta(), s);
}

bool has_comp_mode(const NetworkConfig& c) { return c.beta() > 1.0; }

constexpr double kNegligible = 1e-14;

}  // namespace

// ---------------------------------------------------------------------------

double f_interference_at_zero(double alpha) {
  if (!(alpha > 2.0)) throw std::domain_error("F(y, alpha) requires alpha > 2");
  return (kPi / alpha) / std::sin(2.0 * kPi / alpha);
}

double f_interference_numeric(double y, double alpha, const QuadratureSettings& settings) {
  if (!(alpha > 2.0)) throw std::domain_error("F(y, alpha) requires alpha > 2");
  if (!(y >= 0.0)) throw std::domain_error("F(y, alpha) requires y >= 0");
  if (std::isinf(y)) return 0.0;

  // Tail beyond max(y, 1) in w = u^{2-alpha}, which maps [y, inf) onto the
  // bounded interval (0, y^{2-alpha}] with integrand 1 / (1 + w^{alpha/(alpha-2)}).
  const double p = alpha / (alpha - 2.0);
  const auto tail = [&](double lower) {
    const double top = std::pow(lower, 2.0 - alpha);
    auto res = quad::integrate_finite([p](double w) { return 1.0 / (1.0 + std::pow(w, p)); }, 0.0,
                                      top, settings);
    require(res, "F tail");
    return res.value / (alpha - 2.0);
  };
  if (y >= 1.0) return tail(y);

  auto head = quad::integrate_finite([alpha](double u) { return u / (1.0 + std::pow(u, alpha)); },
                                     y, 1.0, settings);
  require(head, "F head");
  return head.value + tail(1.0);
}

double f_interference(double y, double alpha) {
  if (!(alpha > 2.0)) throw std::domain_error("F(y, alpha) requires alpha > 2");
  if (!(y >= 0.0)) throw std::domain_error("F(y, alpha) requires y >= 0");
  if (alpha == 4.0) {
    // 0.5 (pi/2 - atan(y^2)) written without the cancellation at large y.
    return 0.5 * std::atan2(1.0, y * y);
  }
  return f_interference_numeric(y, alpha);
}

double nearest_distance_pdf(double r, double intensity) {
  if (r <= 0.0 || intensity <= 0.0) return 0.0;
  return 2.0 * kPi * intensity * r * std::exp(-kPi * intensity * r * r);
}

double distance_pdf_macro(double r, const NetworkConfig& config, double q_macro) {
  if (!(q_macro > 0.0)) return 0.0;
  return LinkDensity(config, Tier::Macro, config.beta())(r) / q_macro;
}

double distance_pdf_pico(double r, const NetworkConfig& config, double q_pico) {
  if (!(q_pico > 0.0)) return 0.0;
  return LinkDensity(config, Tier::Pico, 1.0)(r) / q_pico;
}

double distance_pdf_pico_biased(double r, const NetworkConfig& config, double q_pico_biased) {
  if (!(q_pico_biased > 0.0)) return 0.0;
  return LinkDensity(config, Tier::Pico, 1.0 / config.beta())(r) / q_pico_biased;
}

double distance_pdf_comp(double r1, double r2, const NetworkConfig& config, double q_comp) {
  if (!(q_comp > 0.0) || !has_comp_mode(config)) return 0.0;
  if (!comp_region(config).contains(r1, r2)) return 0.0;
  return joint_density_unnormalized(r1, r2, config) / q_comp;
}

quad::CompRegion comp_region(const NetworkConfig& config) {
  if (!has_comp_mode(config)) throw CompModeEmpty();
  const double a2 = config.pico().pathloss_exponent();
  const double ratio = config.pico().power_watts() / config.macro().power_watts();
  quad::CompRegion region;
  region.c_lower = std::pow(ratio, 1.0 / a2);
  region.c_upper = std::pow(config.beta() * ratio, 1.0 / a2);
  region.exponent = config.macro().pathloss_exponent() / a2;
  return region;
}

quad::LengthScales length_scales(const NetworkConfig& config) {
  auto mean_nearest = [](double lambda) { return 0.5 / std::sqrt(lambda); };
  const double l1 = config.macro().intensity();
  const double l2 = config.pico().intensity();
  quad::LengthScales s;
  s.r1 = l1 > 0.0 ? mean_nearest(l1) : (l2 > 0.0 ? mean_nearest(l2) : 1.0);
  s.r2 = l2 > 0.0 ? mean_nearest(l2) : s.r1;
  return s;
}

ModeProbabilities mode_probabilities_closed_form(const NetworkConfig& config) {
  if (!config.same_pathloss()) {
    throw std::domain_error("closed-form mode probabilities need alpha1 == alpha2");
  }
  const double d = 2.0 / config.macro().pathloss_exponent();
  const double l1 = config.macro().intensity();
  const double l2 = config.pico().intensity();
  const double m = l1 * std::pow(config.macro().power_watts(), d);
  const double p = l2 * std::pow(config.pico().power_watts(), d);
  const double p_biased = l2 * std::pow(config.beta() * config.pico().power_watts(), d);
  if (!(m + p > 0.0)) throw std::domain_error("no base stations in either tier");
  ModeProbabilities q;
  q.q_macro = m / (m + p_biased);
  q.q_pico = p / (m + p);
  q.q_comp = has_comp_mode(config) ? std::max(0.0, 1.0 - q.q_macro - q.q_pico) : 0.0;
  return q;
}

ModeProbabilities mode_probabilities_quadrature(const NetworkConfig& config,
                                                const QuadratureSettings& settings) {
  if (!(config.macro().intensity() + config.pico().intensity() > 0.0)) {
    throw std::domain_error("no base stations in either tier");
  }
  ModeProbabilities q;
  q.q_macro = link_mass(config, Tier::Macro, config.beta(), settings);
  q.q_pico = link_mass(config, Tier::Pico, 1.0, settings);
  q.q_comp = has_comp_mode(config) ? std::max(0.0, 1.0 - q.q_macro - q.q_pico) : 0.0;
  return q;
}

ModeProbabilities mode_probabilities(const NetworkConfig& config,
                                     const QuadratureSettings& settings) {
  if (config.same_pathloss()) return mode_probabilities_closed_form(config);
  return mode_probabilities_quadrature(config, settings);
}

ModeProbabilities scheme_mode_weights(Scheme scheme, const NetworkConfig& config,
                                      const QuadratureSettings& settings) {
  switch (scheme) {
    case Scheme::LaCtc: return mode_probabilities(config, settings);
    case Scheme::Traditional: return mode_probabilities(config.with_beta(1.0), settings);
    case Scheme::RangeExpansion: {
      auto q = mode_probabilities(config, settings);
      return {q.q_macro, q.q_pico + q.q_comp, 0.0};
    }
    case Scheme::FullCooperation: return {0.0, 0.0, 1.0};
  }
  return {};
}

double exclusion_ratio(Tier serving, Tier interferer, Scheme scheme, double beta) {
  if (serving == interferer) return 1.0;
  switch (scheme) {
    case Scheme::Traditional:
    case Scheme::FullCooperation: return 1.0;
    case Scheme::LaCtc: return serving == Tier::Macro ? beta : 1.0;
    case Scheme::RangeExpansion: return serving == Tier::Macro ? beta : 1.0 / beta;
  }
  return 1.0;
}

double laplace_noncomp(Tier interferer, Tier serving, double distance, double tau, double a_ij,
                       const NetworkConfig& config) {
  const double coef = noncomp_laplace_coef(interferer, serving, tau, a_ij, config);
  if (coef == 0.0) return 1.0;
  const double e = 2.0 * alpha_of(config, serving) / alpha_of(config, interferer);
  return std::exp(-coef * std::pow(distance, e));
}

double laplace_comp(Tier interferer, double s, double guard_radius, const NetworkConfig& config) {
  return std::exp(-comp_laplace_exponent(interferer, s, guard_radius, config));
}

// ---------------------------------------------------------------------------

double outage_macro(const NetworkConfig& config, const QuadratureSettings& settings) {
  return 1.0 - macro_link(config, settings)(config.tau());
}

double outage_pico(const NetworkConfig& config, const QuadratureSettings& settings) {
  return 1.0 - pico_link(config, settings)(config.tau());
}

double outage_pico_range_expansion(const NetworkConfig& config,
                                   const QuadratureSettings& settings) {
  return 1.0 - pico_link_biased(config, settings)(config.tau());
}

double outage_comp(const NetworkConfig& config, const QuadratureSettings& settings) {
  if (!has_comp_mode(config)) throw CompModeEmpty();
  return 1.0 - CompCoverage(config, settings)(config.tau());
}

double outage_full_cooperation(const NetworkConfig& config, const QuadratureSettings& settings) {
  return 1.0 - FullCooperationCoverage(config, settings)(config.tau());
}

namespace {

// Shared skeleton of outage_breakdown and rate_breakdown: `eval` maps a
// coverage functor to the per-mode metric.
template <typename Eval>
SchemeBreakdown breakdown(Scheme scheme, const NetworkConfig& config,
                          const QuadratureSettings& settings, Eval eval) {
  SchemeBreakdown out;
  out.weights = scheme_mode_weights(scheme, config, settings);
  const auto& w = out.weights;
  switch (scheme) {
    case Scheme::LaCtc:
    case Scheme::Traditional: {
      const auto c = scheme == Scheme::Traditional ? config.with_beta(1.0) : config;
      if (w.q_macro > kNegligible) out.macro = eval(macro_link(c, settings));
      if (w.q_pico > kNegligible) out.pico = eval(pico_link(c, settings));
      if (w.q_comp > kNegligible && has_comp_mode(c)) out.comp = eval(CompCoverage(c, settings));
      break;
    }
    case Scheme::RangeExpansion:
      if (w.q_macro > kNegligible) out.macro = eval(macro_link(config, settings));
      if (w.q_pico > kNegligible) out.pico = eval(pico_link_biased(config, settings));
      break;
    case Scheme::FullCooperation:
      out.comp = eval(FullCooperationCoverage(config, settings));
      break;
  }
  out.overall = w.q_macro * out.macro.value_or(0.0) + w.q_pico * out.pico.value_or(0.0) +
                w.q_comp * out.comp.value_or(0.0);
  return out;
}

}  // namespace

SchemeBreakdown outage_breakdown(Scheme scheme, const NetworkConfig& config,
                                 const QuadratureSettings& settings) {
  const double tau = config.tau();
  auto out = breakdown(scheme, config, settings,
                       [tau](const auto& coverage) { return 1.0 - coverage(tau); });
  out.overall = std::clamp(out.overall, 0.0, 1.0);
  return out;
}

double outage_overall(Scheme scheme, const NetworkConfig& config,
                      const QuadratureSettings& settings) {
  return outage_breakdown(scheme, config, settings).overall;
}

double rate_mode(Mode mode, const NetworkConfig& config, const QuadratureSettings& settings) {
  switch (mode) {
    case Mode::NonCompMacro: return ergodic_rate(macro_link(config, quad::tighter(settings)), settings);
    case Mode::NonCompPico: return ergodic_rate(pico_link(config, quad::tighter(settings)), settings);
    case Mode::Comp:
      if (!has_comp_mode(config)) throw CompModeEmpty();
      return ergodic_rate(CompCoverage(config, quad::tighter(settings)), settings);
  }
  return 0.0;
}

double rate_pico_range_expansion(const NetworkConfig& config, const QuadratureSettings& settings) {
  return ergodic_rate(pico_link_biased(config, quad::tighter(settings)), settings);
}

double rate_full_cooperation(const NetworkConfig& config, const QuadratureSettings& settings) {
  return ergodic_rate(FullCooperationCoverage(config, quad::tighter(settings)), settings);
}

SchemeBreakdown rate_breakdown(Scheme scheme, const NetworkConfig& config,
                               const QuadratureSettings& settings) {
  return breakdown(scheme, config, quad::tighter(settings),
                   [&settings](const auto& coverage) { return ergodic_rate(coverage, settings); });
}

double rate_overall(Scheme scheme, const NetworkConfig& config,
                    const QuadratureSettings& settings) {
  return rate_breakdown(scheme, config, settings).overall;
}

// ---------------------------------------------------------------------------

BsLoad load_per_bs(Scheme scheme, const NetworkConfig& config,
                   const QuadratureSettings& settings) {
  const double l1 = config.macro().intensity();
  const double l2 = config.pico().intensity();
  if (!(l1 > 0.0) || !(l2 > 0.0)) {
    throw ZeroIntensity("load per BS needs nonzero intensity in both tiers");
  }
  const double per_macro = config.user_intensity() / l1;
  const double per_pico = config.user_intensity() / l2;
  switch (scheme) {
    case Scheme::LaCtc: {
      const auto q = mode_probabilities(config, settings);
      return {per_macro * (q.q_macro + q.q_comp), per_pico * (q.q_pico + q.q_comp)};
    }
    case Scheme::RangeExpansion: {
      const auto q = mode_probabilities(config, settings);
      return {per_macro * q.q_macro, per_pico * (q.q_pico + q.q_comp)};
    }
    case Scheme::FullCooperation: return {per_macro, per_pico};
    case Scheme::Traditional: {
      const auto q = mode_probabilities(config.with_beta(1.0), settings);
      return {per_macro * (q.q_macro + q.q_comp), per_pico * q.q_pico};
    }
  }
  return {};
}

double min_user_rate(Scheme scheme, const NetworkConfig& config,
                     const QuadratureSettings& settings) {
  const double lu = config.user_intensity();
  if (!(lu > 0.0)) throw DegenerateTier("user intensity must be > 0 for per-user rates");
  const double l1 = config.macro().intensity();
  const double l2 = config.pico().intensity();

  const auto rates = rate_breakdown(scheme, config, settings);
  const double r_macro = rates.macro.value_or(0.0);
  const double r_pico = rates.pico.value_or(0.0);
  const double r_comp = rates.comp.value_or(0.0);
  const auto& w = rates.weights;

  auto ratio = [](double num, double den, const char* tier) {
    if (!(den > 0.0)) throw DegenerateTier(std::string(tier) + " tier serves no users");
    return num / den;
  };

  double macro_side = 0.0;
  double pico_side = 0.0;
  switch (scheme) {
    case Scheme::LaCtc:
    case Scheme::Traditional: {
      // Tr has q_C = 0, which makes this the range-expansion form at beta = 1.
      const double m = w.q_macro + w.q_comp;
      const double p = w.q_pico + w.q_comp;
      macro_side = ratio(w.q_macro * r_macro + w.q_comp * r_comp, m * m, "macro") * l1 / lu;
      pico_side = ratio(w.q_pico * r_pico + w.q_comp * r_comp, p * p, "pico") * l2 / lu;
      break;
    }
    case Scheme::RangeExpansion:
      macro_side = ratio(r_macro, w.q_macro, "macro") * l1 / lu;
      pico_side = ratio(r_pico, w.q_pico, "pico") * l2 / lu;
      break;
    case Scheme::FullCooperation:
      macro_side = r_comp * l1 / lu;
      pico_side = r_comp * l2 / lu;
      break;
  }
  return std::min(macro_side, pico_side);
}

MetricsReport analyze(Scheme scheme, const NetworkConfig& config, const MetricSelection& metrics,
                      const QuadratureSettings& settings) {
  validate(config);
  MetricsReport report;
  auto& f = report.value;

  if (metrics.modes) {
    const auto w = scheme_mode_weights(scheme, config, settings);
    f.q_macro = w.q_macro;
    f.q_pico = w.q_pico;
    f.q_comp = w.q_comp;
  }
  if (metrics.outage) {
    const auto o = outage_breakdown(scheme, config, settings);
    f.outage_macro = o.macro;
    f.outage_pico = o.pico;
    f.outage_comp = o.comp;
    f.overall_outage = o.overall;
  }
  std::optional<SchemeBreakdown> rates;
  if (metrics.rate) {
    rates = rate_breakdown(scheme, config, settings);
    f.rate_macro = rates->macro;
    f.rate_pico = rates->pico;
    f.rate_comp = rates->comp;
    f.overall_rate = rates->overall;
  }
  if (metrics.load) {
    try {
      const auto load = load_per_bs(scheme, config, settings);
      f.macro_load = load.macro;
      f.pico_load = load.pico;
    } catch (const ZeroIntensity& e) {
      report.warnings.emplace_back(e.what());
    }
  }
  if (metrics.min_rate) {
    try {
      f.min_user_rate = min_user_rate(scheme, config, settings);
    } catch (const DegenerateTier& e) {
      report.warnings.emplace_back(e.what());
    }
  }
  return report;
}

}  // namespace lactc::analytic
