#pragma once

// Adaptive Gauss-Kronrod integration over finite, semi-infinite and
// two-dimensional domains. Every routine is a pure function; integrands must
// be reentrant if the caller integrates from several threads.

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace lactc::quad {

struct QuadratureSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

enum class QuadratureStatus { Converged, MaxSubdivisionsExceeded };

struct QuadratureResult {
  double value = 0.0;
  /// Error estimate; sum over panels of |K15 - G7|.
  double error = 0.0;
  QuadratureStatus status = QuadratureStatus::Converged;
  std::size_t evaluations = 0;

  bool converged() const { return status == QuadratureStatus::Converged; }
};

/// Thrown when the integrand returns NaN or +-inf.
class NonFiniteIntegrand : public std::runtime_error {
 public:
  NonFiniteIntegrand(double x, double fx);
  double where() const { return x_; }

 private:
  double x_;
};

/// Raised by higher layers when a quadrature did not converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Integrand = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;

/// Throws std::invalid_argument when a field is out of range.
void check_settings(const QuadratureSettings& settings);

/// Both tolerances divided by ten; used for integrals nested inside another.
QuadratureSettings tighter(const QuadratureSettings& settings);

/// ∫_a^b f(x) dx.
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureSettings& settings = {});

/// ∫_a^∞ f(x) dx via x = a + scale·t/(1-t), t ∈ (0,1). `scale` should be a
/// typical length of the integrand (the default reproduces the plain map).
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureSettings& settings = {},
                                         double scale = 1.0);

/// Sum of ∫_a^{a+near} f and the semi-infinite rest mapped with `scale`, so
/// an integrand with structure at two magnitudes gets nodes at both. near <= 0
/// or near >= scale falls back to integrate_semi_infinite.
QuadratureResult integrate_semi_infinite_split(const Integrand& f, double a, double near,
                                               const QuadratureSettings& settings = {},
                                               double scale = 1.0);

/// The region {(r1, r2): r1 >= 0, c_lower·r1^e < r2 < c_upper·r1^e}.
/// c_lower = 0 and c_upper = +inf give the open first quadrant.
struct CompRegion {
  double c_lower = 0.0;
  double c_upper = std::numeric_limits<double>::infinity();
  double exponent = 1.0;

  bool contains(double r1, double r2) const;
  /// Throws std::invalid_argument unless 0 <= c_lower < c_upper and exponent > 0.
  void check() const;
};

/// Typical magnitudes of r1 and r2 used to shape the semi-infinite maps.
struct LengthScales {
  double r1 = 1.0;
  double r2 = 1.0;
  /// Optional smaller magnitudes (see integrate_semi_infinite_split).
  double r1_near = 0.0;
  double r2_near = 0.0;
};

/// ∫_0^∞ ∫_{c_lower r1^e}^{c_upper r1^e} g(r1, r2) dr2 dr1. The inner integral
/// runs in v = r2 / r1^e so its limits are constant.
QuadratureResult integrate_comp_region(const Integrand2D& g, const CompRegion& region,
                                       const QuadratureSettings& settings = {},
                                       LengthScales scales = {});

/// ∫_0^∞ ∫_0^∞ g(r1, r2) dr2 dr1.
QuadratureResult integrate_first_quadrant(const Integrand2D& g,
                                          const QuadratureSettings& settings = {},
                                          LengthScales scales = {});

struct RateIntegral {
  double value = 0.0;
  /// Quadrature error plus the tail bound.
  double error = 0.0;
  /// Upper end of the integrated t-range.
  double truncation = 0.0;
  /// Bound on ∫_T^∞ coverage(t) dt assuming log-concave decay beyond T.
  double tail_bound = 0.0;
  QuadratureStatus status = QuadratureStatus::Converged;

  bool converged() const { return status == QuadratureStatus::Converged; }
};

/// ∫_0^∞ coverage(t) dt for a nonincreasing coverage curve with values in
/// [0, 1]. The axis is cut at the first T = 2^k where coverage(T) <= abs_tol.
RateIntegral integrate_rate(const Integrand& coverage, const QuadratureSettings& settings = {});

}  // namespace lactc::quad
