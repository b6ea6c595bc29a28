#include "lactc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace lactc::quad {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (positive half, descending) with the
// embedded 7-point Gauss rule at the odd indices.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
  const double fx = f(x);
  if (!std::isfinite(fx)) throw NonFiniteIntegrand(x, fx);
  return fx;
}

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double lo = checked(f, center - dx);
    const double hi = checked(f, center + dx);
    kronrod += kWgk[j] * (lo + hi);
    abs_sum += kWgk[j] * (std::abs(lo) + std::abs(hi));
    if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
  }
  kronrod *= half;
  gauss *= half;
  // |K - G| can vanish by accident; rounding in the sum cannot.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(half) * abs_sum;
  return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

// Global adaptive refinement starting from the panels between consecutive
// edges; the tolerance applies to the total, not to each initial panel.
QuadratureResult adaptive(const Integrand& f, const std::vector<double>& edges,
                          const QuadratureSettings& s) {
  check_settings(s);
  QuadratureResult out;
  if (edges.size() < 2 || edges.front() == edges.back()) return out;

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  const int initial_panels = static_cast<int>(edges.size()) - 1;
  for (int i = 0; i < initial_panels; ++i) {
    auto p = gauss_kronrod(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  out.evaluations = 15u * static_cast<std::size_t>(initial_panels);

  int subdivisions = initial_panels;
  // Panels that can no longer be split in floating point are parked here.
  double frozen_value = 0.0;
  double frozen_err = 0.0;
  while (total_err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
    if (heap.empty()) break;
    if (subdivisions >= s.max_subdivisions) {
      out.status = QuadratureStatus::MaxSubdivisionsExceeded;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen_value += worst.value;
      frozen_err += worst.error;
      continue;
    }
    auto left = gauss_kronrod(f, worst.a, mid);
    auto right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from scratch; the running total accumulates cancellation noise.
  total = frozen_value;
  total_err = frozen_err;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  if (out.status == QuadratureStatus::Converged &&
      total_err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
    out.status = QuadratureStatus::MaxSubdivisionsExceeded;
  }
  return out;
}

std::vector<double> uniform_edges(double a, double b, int panels) {
  std::vector<double> edges(panels + 1);
  for (int i = 0; i < panels; ++i) edges[i] = a + (b - a) * i / panels;
  edges[panels] = b;
  return edges;
}

Integrand semi_infinite_map(const Integrand& f, double a, double scale) {
  return [&f, a, scale](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * scale / (one_minus * one_minus);
  };
}

}  // namespace

NonFiniteIntegrand::NonFiniteIntegrand(double x, double fx)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "integrand returned " << fx << " at x = " << x;
        return os.str();
      }()),
      x_(x) {}

void check_settings(const QuadratureSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || s.max_subdivisions < 1) {
    throw std::invalid_argument("quadrature tolerances must be > 0 and max_subdivisions >= 1");
  }
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureSettings& settings) {
  return adaptive(f, {a, b}, settings);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureSettings& settings, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("semi-infinite scale must be > 0");
  const auto mapped = semi_infinite_map(f, a, scale);
  return adaptive(mapped, uniform_edges(0.0, 1.0, 8), settings);
}

QuadratureResult integrate_semi_infinite_split(const Integrand& f, double a, double near,
                                               const QuadratureSettings& settings, double scale) {
  if (!(near > 0.0) || near >= scale) return integrate_semi_infinite(f, a, settings, scale);
  auto head = integrate_finite(f, a, a + near, settings);
  auto tail = integrate_semi_infinite(f, a + near, settings, scale);
  head.value += tail.value;
  head.error += tail.error;
  head.evaluations += tail.evaluations;
  if (!tail.converged()) head.status = tail.status;
  return head;
}

bool CompRegion::contains(double r1, double r2) const {
  if (r1 < 0.0) return false;
  const double base = std::pow(r1, exponent);
  return r2 > c_lower * base && r2 < c_upper * base;
}

void CompRegion::check() const {
  if (!(c_lower >= 0.0) || !(c_upper > c_lower) || !(exponent > 0.0)) {
    throw std::invalid_argument("CoMP region needs 0 <= c_lower < c_upper and exponent > 0");
  }
}

QuadratureSettings tighter(const QuadratureSettings& s) {
  return {s.rel_tol / 10.0, s.abs_tol / 10.0, s.max_subdivisions};
}

QuadratureResult integrate_comp_region(const Integrand2D& g, const CompRegion& region,
                                       const QuadratureSettings& settings, LengthScales scales) {
  region.check();
  // Inner results carry quadrature noise into the outer integrand; resolving
  // them an order of magnitude finer keeps the outer refinement from chasing it.
  const auto inner_settings = tighter(settings);
  bool inner_failed = false;
  const bool unbounded = std::isinf(region.c_upper);

  const Integrand outer = [&](double r1) {
    if (r1 <= 0.0) return 0.0;
    const double jac = std::pow(r1, region.exponent);
    const Integrand inner = [&](double v) { return g(r1, v * jac) * jac; };
    QuadratureResult in;
    if (unbounded) {
      in = integrate_semi_infinite(inner, region.c_lower, inner_settings, scales.r2 / jac);
    } else {
      in = integrate_finite(inner, region.c_lower, region.c_upper, inner_settings);
    }
    if (!in.converged()) inner_failed = true;
    return in.value;
  };
  auto out = integrate_semi_infinite_split(outer, 0.0, scales.r1_near, settings, scales.r1);
  out.error += inner_settings.rel_tol * std::abs(out.value);
  if (inner_failed) out.status = QuadratureStatus::MaxSubdivisionsExceeded;
  return out;
}

QuadratureResult integrate_first_quadrant(const Integrand2D& g, const QuadratureSettings& settings,
                                          LengthScales scales) {
  const auto inner_settings = tighter(settings);
  bool inner_failed = false;
  const Integrand outer = [&](double r1) {
    const Integrand inner = [&](double r2) { return g(r1, r2); };
    auto in = integrate_semi_infinite_split(inner, 0.0, scales.r2_near, inner_settings, scales.r2);
    if (!in.converged()) inner_failed = true;
    return in.value;
  };
  auto out = integrate_semi_infinite_split(outer, 0.0, scales.r1_near, settings, scales.r1);
  out.error += inner_settings.rel_tol * std::abs(out.value);
  if (inner_failed) out.status = QuadratureStatus::MaxSubdivisionsExceeded;
  return out;
}

RateIntegral integrate_rate(const Integrand& coverage, const QuadratureSettings& settings) {
  check_settings(settings);
  constexpr double kMaxT = 1 << 14;
  RateIntegral out;

  double t_end = 1.0;
  double c_end = checked(coverage, t_end);
  double c_half = 1.0;
  while (c_end > settings.abs_tol && t_end < kMaxT) {
    c_half = c_end;
    t_end *= 2.0;
    c_end = checked(coverage, t_end);
  }
  if (c_end > settings.abs_tol) out.status = QuadratureStatus::MaxSubdivisionsExceeded;

  // Coverage curves are flat near t = 0 and decay over decades of t, so the
  // axis is pre-split at the powers of two visited above.
  std::vector<double> edges = {0.0};
  for (double hi = 1.0; hi <= t_end; hi *= 2.0) edges.push_back(hi);
  const auto body = adaptive(coverage, edges, settings);

  double tail = 0.0;
  if (c_end > 0.0) {
    const double half_span = t_end / 2.0;
    const double decay = std::log(c_half / c_end) / half_span;
    tail = decay > 0.0 ? c_end / decay : std::numeric_limits<double>::infinity();
  }

  out.value = body.value;
  out.tail_bound = tail;
  out.error = body.error + tail;
  out.truncation = t_end;
  if (!body.converged()) out.status = QuadratureStatus::MaxSubdivisionsExceeded;
  return out;
}

}  // namespace lactc::quad
