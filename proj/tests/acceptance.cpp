// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion; with a
// criterion number as argument only that one runs. Exit status is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lactc/analytic.hpp"
#include "lactc/simulator.hpp"

using namespace lactc;

namespace {

// Pinned tolerances.
constexpr double kZ95 = 1.959963984540054;
constexpr double kClosedFormTol = 1e-4;
constexpr double kModeProbTol = 1e-6;
constexpr double kFAtFourTol = 1e-10;
constexpr double kFAtZeroTol = 1e-8;
constexpr double kSigmas = 3.0;
constexpr double kOrderingGap = 1e-6;
constexpr double kLoadInvarianceTol = 1e-6;
constexpr std::uint64_t kIterations = 100'000;
constexpr std::uint64_t kSeed = 42;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

sim::SimSettings settings(std::uint64_t iterations = kIterations, std::uint64_t seed = kSeed) {
  sim::SimSettings s;
  s.iterations = iterations;
  s.seed = seed;
  return s;
}

double sigma(const sim::EstimateWithCI& e) { return e.half_width / kZ95; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict closed_form_outage() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = NetworkConfig::defaults().with_noise_watts(0.0).with_beta(1.0).with_tau(1.0);
  const double closed = 1.0 - 1.0 / (1.0 + kPi / 4.0);
  const double analytic = analytic::outage_overall(Scheme::Traditional, c);
  const auto r = sim::simulate(Scheme::Traditional, c, settings());
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = std::abs(analytic - closed) <= kClosedFormTol &&
           std::abs(r.overall_outage.value - closed) <= r.overall_outage.half_width && elapsed < 30.0;
  v.detail = fmt("closed %.6f analytic %.6f sim %.4f +- %.4f, %.1f s", closed, analytic,
                 r.overall_outage.value, r.overall_outage.half_width, elapsed);
  return v;
}

Verdict outage_curve() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  double worst = 0.0;
  double worst_tau = 0.0;
  for (int tau_db = -10; tau_db <= 20; tau_db += 2) {
    const auto c = NetworkConfig::defaults().with_tau(db_to_linear(tau_db));
    const double a = analytic::outage_overall(Scheme::LaCtc, c);
    const auto r = sim::simulate(Scheme::LaCtc, c, settings(kIterations, kSeed + tau_db + 10));
    const double dev = std::abs(a - r.overall_outage.value) / sigma(r.overall_outage);
    if (dev > worst) {
      worst = dev;
      worst_tau = tau_db;
    }
    if (dev > kSigmas) v.pass = false;
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 300.0) v.pass = false;
  v.detail = fmt("16 points, worst deviation %.2f sigma at %g dB, %.1f s", worst, worst_tau, elapsed);
  return v;
}

Verdict mode_probabilities() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(2.3, 5.5), p1(30.0, 46.0), p2(10.0, 30.0),
      ratio(0.2, 30.0), beta_db(0.0, 15.0);
  const double l1 = 1.0 / (500.0 * 500.0 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = alpha(rng);
    const NetworkConfig c(TierParams(p1(rng), l1, a), TierParams(p2(rng), ratio(rng) * l1, a), 0.0,
                          db_to_linear(beta_db(rng)), 1.0, 10.0 * l1);
    const auto closed = analytic::mode_probabilities_closed_form(c);
    const auto numeric = analytic::mode_probabilities_quadrature(c);
    worst = std::max({worst, std::abs(closed.q_macro - numeric.q_macro),
                      std::abs(closed.q_pico - numeric.q_pico), std::abs(closed.q_comp - numeric.q_comp)});
  }
  if (worst > kModeProbTol) v.pass = false;

  const auto c = NetworkConfig::defaults();
  const auto q = analytic::mode_probabilities(c);
  const auto f = sim::estimate_mode_fractions(c, settings(1'000'000));
  double worst_sigma = 0.0;
  for (auto m : {Mode::NonCompMacro, Mode::NonCompPico, Mode::Comp}) {
    const auto& e = f[static_cast<int>(m)];
    worst_sigma = std::max(worst_sigma, std::abs(e.value - q.of(m)) / sigma(e));
  }
  if (worst_sigma > kSigmas) v.pass = false;
  v.detail = fmt("closed vs quadrature max |diff| %.2e over 20 configs; simulated fractions worst %.2f sigma",
                 worst, worst_sigma);
  return v;
}

Verdict f_special_cases() {
  Verdict v;
  double worst4 = 0.0;
  for (double z : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    const double closed = 0.5 * (kPi / 2.0 - std::atan(z * z));
    worst4 = std::max(worst4, std::abs(analytic::f_interference_numeric(z, 4.0) - closed));
  }
  double worst0 = 0.0;
  for (double alpha : {3.0, 3.5, 4.0, 5.0}) {
    const double closed = (kPi / alpha) / std::sin(2.0 * kPi / alpha);
    worst0 = std::max(worst0, std::abs(analytic::f_interference(0.0, alpha) - closed));
  }
  v.pass = worst4 <= kFAtFourTol && worst0 <= kFAtZeroTol;
  v.detail = fmt("F(z,4) max err %.1e, F(0,alpha) max err %.1e", worst4, worst0);
  return v;
}

Verdict scheme_ordering() {
  Verdict v;
  double min_gap = INFINITY;
  for (double beta_db : {2.0, 4.0, 8.0, 10.0}) {
    const auto c = NetworkConfig::defaults().with_beta(db_to_linear(beta_db));
    using analytic::outage_overall;
    using analytic::rate_overall;
    const double o_fc = outage_overall(Scheme::FullCooperation, c);
    const double o_la = outage_overall(Scheme::LaCtc, c);
    const double o_tr = outage_overall(Scheme::Traditional, c);
    const double o_re = outage_overall(Scheme::RangeExpansion, c);
    const double r_fc = rate_overall(Scheme::FullCooperation, c);
    const double r_la = rate_overall(Scheme::LaCtc, c);
    const double r_tr = rate_overall(Scheme::Traditional, c);
    const double r_re = rate_overall(Scheme::RangeExpansion, c);
    for (double gap : {o_la - o_fc, o_tr - o_la, o_re - o_tr, r_fc - r_la, r_la - r_tr, r_tr - r_re}) {
      min_gap = std::min(min_gap, gap);
      if (gap <= kOrderingGap) {
        v.pass = false;
        v.detail += fmt("ordering broken at %g dB; ", beta_db);
      }
    }
  }
  v.detail += fmt("smallest gap %.3e", min_gap);
  return v;
}

Verdict loads() {
  Verdict v;
  const auto c = NetworkConfig::defaults();
  double worst = 0.0;
  for (auto scheme : kAllSchemes) {
    const auto a = analytic::load_per_bs(scheme, c);
    const auto r = sim::simulate(scheme, c, settings());
    for (auto [an, est] : {std::pair{a.macro, *r.macro_load}, std::pair{a.pico, *r.pico_load}}) {
      const double diff = std::abs(an - est.value);
      if (est.half_width == 0.0) {
        // FC loads are deterministic.
        if (diff > 1e-12) v.pass = false;
        continue;
      }
      worst = std::max(worst, diff / sigma(est));
      if (diff > kSigmas * sigma(est)) v.pass = false;
    }
  }
  const double ref = analytic::load_per_bs(Scheme::LaCtc, c).macro;
  double drift = 0.0;
  for (double beta_db : {0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0}) {
    drift = std::max(drift, std::abs(analytic::load_per_bs(Scheme::LaCtc, c.with_beta(db_to_linear(beta_db))).macro - ref));
  }
  if (drift > kLoadInvarianceTol) v.pass = false;
  v.detail = fmt("worst load deviation %.2f sigma; LA-CTC macro load drift over beta %.1e", worst, drift);
  return v;
}

Verdict tr_rate() {
  const auto c = NetworkConfig::defaults();
  const double a = analytic::rate_overall(Scheme::Traditional, c);
  const auto r = sim::simulate(Scheme::Traditional, c, settings());
  const double dev = std::abs(a - r.overall_rate.value) / sigma(r.overall_rate);
  Verdict v;
  v.pass = dev <= kSigmas;
  v.detail = fmt("analytic %.5f sim %.5f +- %.5f (%.2f sigma)", a, r.overall_rate.value,
                 r.overall_rate.half_width, dev);
  return v;
}

Verdict coherent_pairs_bound() {
  const auto c = NetworkConfig::defaults();
  auto s = settings();
  const auto independent = sim::simulate(Scheme::LaCtc, c, s);
  s.interference = sim::InterferenceModel::CoherentPairs;
  const auto coherent = sim::simulate(Scheme::LaCtc, c, s);
  const double diff = coherent.overall_outage.value - independent.overall_outage.value;
  const double combined = coherent.overall_outage.half_width + independent.overall_outage.half_width;
  Verdict v;
  v.pass = diff > combined;
  v.detail = fmt("coherent-pairs %.4f +- %.4f vs independent %.4f +- %.4f (difference %+.4f, needs > %.4f)",
                 coherent.overall_outage.value, coherent.overall_outage.half_width,
                 independent.overall_outage.value, independent.overall_outage.half_width, diff, combined);
  return v;
}

Verdict determinism() {
  Verdict v;
  int runs = 0;
  for (const char* scheme : {"lactc", "re", "fc", "tr"}) {
    std::string first;
    for (const char* workers : {"1", "2", "4", "16"}) {
      std::ostringstream out, err;
      const int code = cli::run({"simulate", "-s", scheme, "--iterations", "20000", "--seed", "2024",
                                 "--workers", workers},
                                out, err);
      ++runs;
      if (code != 0) v.pass = false;
      if (first.empty()) first = out.str();
      if (out.str() != first) {
        v.pass = false;
        v.detail += fmt("%s differs at %s workers; ", scheme, workers);
      }
    }
  }
  v.detail += fmt("%d simulate runs over 4 schemes x {1,2,4,16} workers", runs);
  return v;
}

struct Criterion {
  const char* name;
  std::function<Verdict()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"closed-form interference-limited outage", closed_form_outage},
      {"LA-CTC outage curve, analysis vs simulation", outage_curve},
      {"mode probabilities, closed form vs quadrature vs simulation", mode_probabilities},
      {"F special cases", f_special_cases},
      {"scheme ordering of outage and rate", scheme_ordering},
      {"loads per BS", loads},
      {"Tr ergodic rate, analysis vs simulation", tr_rate},
      {"coherent-pairs outage above independent", coherent_pairs_bound},
      {"worker-count determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const auto& all = criteria();
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(all.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], all.size());
      return 2;
    }
  }
  int failed = 0;
  for (int i = 1; i <= static_cast<int>(all.size()); ++i) {
    if (only != 0 && i != only) continue;
    Verdict v;
    try {
      v = all[i - 1].check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] C%d %s: %s\n", v.pass ? "PASS" : "FAIL", i, all[i - 1].name, v.detail.c_str());
    if (!v.pass) ++failed;
  }
  return failed;
}
