#include "lactc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <random>
#include <string>
#include <thread>

namespace lactc::sim {

// ---------------------------------------------------------------------------
// Philox4x32-10

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::encrypt(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, id_(id) {}

void RandomStream::refill() {
  buffer_ = Philox4x32::encrypt({static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(id_),
                                 static_cast<std::uint32_t>(id_ >> 32)},
                                key_);
  ++block_;
  used_ = 0;
}

RandomStream::result_type RandomStream::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t hi = buffer_[used_];
  const std::uint64_t lo = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RandomStream::exponential() { return -std::log1p(-uniform()); }

// ---------------------------------------------------------------------------

std::string_view to_string(InterferenceModel model) {
  return model == InterferenceModel::Independent ? "independent" : "coherent-pairs";
}

InterferenceModel parse_interference_model(std::string_view text) {
  if (text == "independent") return InterferenceModel::Independent;
  if (text == "coherent-pairs" || text == "coherent_pairs") return InterferenceModel::CoherentPairs;
  throw std::invalid_argument("unknown interference model '" + std::string(text) +
                              "' (expected independent or coherent-pairs)");
}

void SimSettings::check() const {
  if (!(window_half_width > 0.0) || !std::isfinite(window_half_width)) {
    throw std::invalid_argument("window half width must be finite and > 0");
  }
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

EmptyTier::EmptyTier(Tier tier)
    : std::runtime_error(std::string("realization has no ") +
                         (tier == Tier::Macro ? "macro" : "pico") + " BS"),
      tier_(tier) {}

namespace {

void fill_ppp(double intensity, double half_width, RandomStream& rng, std::vector<Point>& out) {
  out.clear();
  const double side = 2.0 * half_width;
  const double mean = intensity * side * side;
  if (!(mean > 0.0)) return;
  std::poisson_distribution<std::uint64_t> count(mean);
  const std::uint64_t n = count(rng);
  out.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double x = (rng.uniform() - 0.5) * side;
    const double y = (rng.uniform() - 0.5) * side;
    out.push_back({x, y});
  }
}

inline double norm2(const Point& p) { return p.x * p.x + p.y * p.y; }

// d^{-alpha} from the squared distance.
inline double path_gain(double d2, double alpha) {
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

std::size_t nearest(const std::vector<Point>& pts, double& d2_min) {
  std::size_t best = ModeSelection::npos;
  d2_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double d2 = norm2(pts[k]);
    if (d2 < d2_min) {
      d2_min = d2;
      best = k;
    }
  }
  return best;
}

double received(const TierParams& t, double r) {
  if (std::isinf(r)) return 0.0;
  return t.power_watts() * std::pow(r, -t.pathloss_exponent());
}

bool serves(Mode mode, Tier tier) {
  if (mode == Mode::Comp) return true;
  return (mode == Mode::NonCompMacro) == (tier == Tier::Macro);
}

// Unit-variance circular complex Gaussian.
std::complex<double> complex_gaussian(RandomStream& rng) {
  const double amplitude = std::sqrt(rng.exponential());
  const double phase = 2.0 * kPi * rng.uniform();
  return std::polar(amplitude, phase);
}

struct Interferer {
  Point p;
  double power;  // P_j d^{-alpha_j}
};

double independent_interference(const std::vector<Interferer>& all, RandomStream& rng) {
  double sum = 0.0;
  for (const auto& x : all) sum += x.power * rng.exponential();
  return sum;
}

// Picos nearest the user first; each takes the nearest macro not yet paired
// and the two signals add coherently. Leftovers fade independently.
double coherent_pair_interference(std::vector<Interferer>& macros, std::vector<Interferer>& picos,
                                  RandomStream& rng) {
  std::sort(picos.begin(), picos.end(),
            [](const Interferer& a, const Interferer& b) { return norm2(a.p) < norm2(b.p); });
  std::vector<bool> taken(macros.size(), false);
  std::size_t left = macros.size();
  double sum = 0.0;
  for (const auto& pico : picos) {
    if (left == 0) {
      sum += pico.power * rng.exponential();
      continue;
    }
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < macros.size(); ++k) {
      if (taken[k]) continue;
      const double dx = macros[k].p.x - pico.p.x;
      const double dy = macros[k].p.y - pico.p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    taken[best] = true;
    --left;
    const auto field = std::sqrt(pico.power) * complex_gaussian(rng) +
                       std::sqrt(macros[best].power) * complex_gaussian(rng);
    sum += std::norm(field);
  }
  for (std::size_t k = 0; k < macros.size(); ++k) {
    if (!taken[k]) sum += macros[k].power * rng.exponential();
  }
  return sum;
}

void collect_interferers(const std::vector<Point>& pts, std::size_t skip, const TierParams& t,
                         std::vector<Interferer>& out) {
  out.clear();
  out.reserve(pts.size());
  const double p = t.power_watts();
  const double alpha = t.pathloss_exponent();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == skip) continue;
    out.push_back({pts[k], p * path_gain(norm2(pts[k]), alpha)});
  }
}

}  // namespace

std::vector<Point> sample_ppp(double intensity, double half_width, RandomStream& rng) {
  if (!(intensity >= 0.0)) throw std::invalid_argument("PPP intensity must be >= 0");
  std::vector<Point> out;
  fill_ppp(intensity, half_width, rng, out);
  return out;
}

NetworkRealization sample_realization(const NetworkConfig& config, double half_width,
                                      RandomStream& rng) {
  NetworkRealization r;
  fill_ppp(config.macro().intensity(), half_width, rng, r.macro);
  fill_ppp(config.pico().intensity(), half_width, rng, r.pico);
  return r;
}

ModeSelection select_mode(const NetworkRealization& realization, const NetworkConfig& config) {
  ModeSelection sel;
  double d2_macro, d2_pico;
  sel.macro_index = nearest(realization.macro, d2_macro);
  sel.pico_index = nearest(realization.pico, d2_pico);
  // An empty tier is legitimate only when its intensity is zero.
  if (sel.macro_index == ModeSelection::npos &&
      (config.macro().intensity() > 0.0 || sel.pico_index == ModeSelection::npos)) {
    throw EmptyTier(Tier::Macro);
  }
  if (sel.pico_index == ModeSelection::npos && config.pico().intensity() > 0.0) {
    throw EmptyTier(Tier::Pico);
  }
  sel.r1 = std::sqrt(d2_macro);
  sel.r2 = std::sqrt(d2_pico);

  const double s1 = received(config.macro(), sel.r1);
  const double s2 = received(config.pico(), sel.r2);
  if (s1 >= config.beta() * s2) {
    sel.mode = Mode::NonCompMacro;
  } else if (s1 <= s2) {
    sel.mode = Mode::NonCompPico;
  } else {
    sel.mode = Mode::Comp;
  }
  return sel;
}

Mode serving_mode(Scheme scheme, const ModeSelection& selection, const NetworkConfig& config) {
  switch (scheme) {
    case Scheme::LaCtc: return selection.mode;
    case Scheme::FullCooperation: return Mode::Comp;
    case Scheme::RangeExpansion:
      return selection.mode == Mode::NonCompMacro ? Mode::NonCompMacro : Mode::NonCompPico;
    case Scheme::Traditional: {
      const double s1 = received(config.macro(), selection.r1);
      const double s2 = received(config.pico(), selection.r2);
      return s1 >= s2 ? Mode::NonCompMacro : Mode::NonCompPico;
    }
  }
  return selection.mode;
}

namespace {

// Scratch buffers reused across iterations of one worker.
struct Workspace {
  NetworkRealization realization;
  std::vector<Interferer> macro_interferers;
  std::vector<Interferer> pico_interferers;
};

SinrSample sinr_for(const NetworkRealization& realization, const ModeSelection& sel, Scheme scheme,
                    const NetworkConfig& config, RandomStream& rng, InterferenceModel model,
                    Workspace& ws) {
  SinrSample out;
  out.mode = serving_mode(scheme, sel, config);
  out.r1 = sel.r1;
  out.r2 = sel.r2;
  const bool macro_serves = serves(out.mode, Tier::Macro);
  const bool pico_serves = serves(out.mode, Tier::Pico);
  if ((macro_serves && sel.macro_index == ModeSelection::npos) ||
      (pico_serves && sel.pico_index == ModeSelection::npos)) {
    throw EmptyTier(macro_serves && sel.macro_index == ModeSelection::npos ? Tier::Macro
                                                                            : Tier::Pico);
  }

  double signal;
  if (macro_serves && pico_serves) {
    const double theta1 = std::sqrt(received(config.macro(), sel.r1));
    const double theta2 = std::sqrt(received(config.pico(), sel.r2));
    signal = std::norm(theta1 * complex_gaussian(rng) + theta2 * complex_gaussian(rng));
  } else {
    const double r = macro_serves ? sel.r1 : sel.r2;
    signal = received(config.tier(macro_serves ? Tier::Macro : Tier::Pico), r) * rng.exponential();
  }

  collect_interferers(realization.macro, macro_serves ? sel.macro_index : ModeSelection::npos,
                      config.macro(), ws.macro_interferers);
  collect_interferers(realization.pico, pico_serves ? sel.pico_index : ModeSelection::npos,
                      config.pico(), ws.pico_interferers);
  double interference;
  if (model == InterferenceModel::Independent) {
    interference = independent_interference(ws.macro_interferers, rng) +
                   independent_interference(ws.pico_interferers, rng);
  } else {
    interference = coherent_pair_interference(ws.macro_interferers, ws.pico_interferers, rng);
  }
  out.sinr = signal / (config.noise_watts() + interference);
  return out;
}

}  // namespace

SinrSample sample_sinr(const NetworkRealization& realization, Scheme scheme,
                       const NetworkConfig& config, RandomStream& rng, InterferenceModel model) {
  Workspace ws;
  return sinr_for(realization, select_mode(realization, config), scheme, config, rng, model, ws);
}

// ---------------------------------------------------------------------------
// Monte Carlo driver

namespace {

constexpr std::uint64_t kChunk = 1024;
constexpr int kMaxResamples = 1000;
constexpr double kZ95 = 1.959963984540054;

struct Tally {
  std::array<std::uint64_t, 3> n{};
  std::array<std::uint64_t, 3> outages{};
  std::array<double, 3> rate_sum{};
  std::array<double, 3> rate_sq{};
  // Indexed by Tier: iterations associated with a BS of that tier.
  std::array<std::uint64_t, 2> assoc{};
  std::array<double, 2> assoc_rate_sum{};
  std::array<double, 2> assoc_rate_sq{};
  std::uint64_t resamples = 0;

  void merge(const Tally& o) {
    for (int m = 0; m < 3; ++m) {
      n[m] += o.n[m];
      outages[m] += o.outages[m];
      rate_sum[m] += o.rate_sum[m];
      rate_sq[m] += o.rate_sq[m];
    }
    for (int t = 0; t < 2; ++t) {
      assoc[t] += o.assoc[t];
      assoc_rate_sum[t] += o.assoc_rate_sum[t];
      assoc_rate_sq[t] += o.assoc_rate_sq[t];
    }
    resamples += o.resamples;
  }
};

Tally run_chunk(std::uint64_t first, std::uint64_t last, Scheme scheme, const NetworkConfig& config,
                const SimSettings& settings) {
  Tally tally;
  Workspace ws;
  for (std::uint64_t it = first; it < last; ++it) {
    RandomStream rng(settings.seed, it);
    ModeSelection sel;
    for (int attempt = 0;; ++attempt) {
      fill_ppp(config.macro().intensity(), settings.window_half_width, rng, ws.realization.macro);
      fill_ppp(config.pico().intensity(), settings.window_half_width, rng, ws.realization.pico);
      try {
        sel = select_mode(ws.realization, config);
        break;
      } catch (const EmptyTier&) {
        if (attempt >= kMaxResamples) throw;
        ++tally.resamples;
      }
    }
    const auto s = sinr_for(ws.realization, sel, scheme, config, rng, settings.interference, ws);
    const int m = static_cast<int>(s.mode);
    const double rate = std::log1p(s.sinr);
    ++tally.n[m];
    if (s.sinr <= config.tau()) ++tally.outages[m];
    tally.rate_sum[m] += rate;
    tally.rate_sq[m] += rate * rate;
    for (Tier t : {Tier::Macro, Tier::Pico}) {
      if (!serves(s.mode, t)) continue;
      const int k = static_cast<int>(t);
      ++tally.assoc[k];
      tally.assoc_rate_sum[k] += rate;
      tally.assoc_rate_sq[k] += rate * rate;
    }
  }
  return tally;
}

EstimateWithCI proportion(std::uint64_t hits, std::uint64_t n) {
  EstimateWithCI e;
  e.count = n;
  if (n == 0) return e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.value = std::clamp(p, 0.0, 1.0);
  e.half_width = kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

EstimateWithCI mean(double sum, double sq, std::uint64_t n) {
  EstimateWithCI e;
  e.count = n;
  if (n == 0) return e;
  const double nn = static_cast<double>(n);
  e.value = sum / nn;
  const double var = n > 1 ? std::max(0.0, (sq - sum * sum / nn) / (nn - 1.0)) : 0.0;
  e.half_width = kZ95 * std::sqrt(var / nn);
  return e;
}

EstimateWithCI scaled(EstimateWithCI e, double factor) {
  e.value *= factor;
  e.half_width *= factor;
  return e;
}

// E[X] / E[Y]^2 with X = rate·1{A}, Y = 1{A}; delta-method interval.
std::optional<EstimateWithCI> rate_per_load(const Tally& t, int tier, std::uint64_t n) {
  if (t.assoc[tier] == 0) return std::nullopt;
  const double nn = static_cast<double>(n);
  const double a = t.assoc_rate_sum[tier] / nn;
  const double b = static_cast<double>(t.assoc[tier]) / nn;
  const double var_x = std::max(0.0, t.assoc_rate_sq[tier] / nn - a * a);
  const double var_y = b * (1.0 - b);
  const double cov = a - a * b;  // X·Y = X
  const double ga = 1.0 / (b * b);
  const double gb = -2.0 * a / (b * b * b);
  const double var = std::max(0.0, ga * ga * var_x + gb * gb * var_y + 2.0 * ga * gb * cov) / nn;
  EstimateWithCI e;
  e.value = a / (b * b);
  e.half_width = kZ95 * std::sqrt(var);
  e.count = t.assoc[tier];
  return e;
}

std::array<bool, 3> possible_modes(Scheme scheme, const NetworkConfig& config) {
  switch (scheme) {
    case Scheme::LaCtc: return {true, true, config.beta() > 1.0};
    case Scheme::FullCooperation: return {false, false, true};
    case Scheme::RangeExpansion:
    case Scheme::Traditional: return {true, true, false};
  }
  return {true, true, true};
}

}  // namespace

SimulationResult simulate(Scheme scheme, const NetworkConfig& config,
                          const SimSettings& settings) {
  validate(config);
  settings.check();

  const std::uint64_t n = settings.iterations;
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Tally> tallies(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&](std::exception_ptr& err) {
    try {
      for (std::uint64_t c = next++; c < chunks && !failed; c = next++) {
        tallies[c] = run_chunk(c * kChunk, std::min(n, (c + 1) * kChunk), scheme, config, settings);
      }
    } catch (...) {
      err = std::current_exception();
      failed = true;
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(settings.workers, chunks));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker, std::ref(errors[w]));
  worker(errors[0]);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Chunk order fixes the floating-point summation order.
  Tally total;
  for (const auto& t : tallies) total.merge(t);

  SimulationResult r;
  r.scheme = scheme;
  r.iterations = n;
  r.resamples = total.resamples;
  r.possible = possible_modes(scheme, config);
  std::uint64_t all_outages = 0;
  double all_sum = 0.0, all_sq = 0.0;
  for (int m = 0; m < 3; ++m) {
    r.mode_fraction[m] = proportion(total.n[m], n);
    r.outage[m] = proportion(total.outages[m], total.n[m]);
    r.rate[m] = mean(total.rate_sum[m], total.rate_sq[m], total.n[m]);
    all_outages += total.outages[m];
    all_sum += total.rate_sum[m];
    all_sq += total.rate_sq[m];
  }
  r.overall_outage = proportion(all_outages, n);
  r.overall_rate = mean(all_sum, all_sq, n);

  const double l1 = config.macro().intensity();
  const double l2 = config.pico().intensity();
  const double lu = config.user_intensity();
  if (l1 > 0.0 && l2 > 0.0) {
    r.macro_load = scaled(proportion(total.assoc[0], n), lu / l1);
    r.pico_load = scaled(proportion(total.assoc[1], n), lu / l2);
  }
  if (lu > 0.0) {
    auto macro_side = rate_per_load(total, 0, n);
    auto pico_side = rate_per_load(total, 1, n);
    if (macro_side && pico_side) {
      auto m = scaled(*macro_side, l1 / lu);
      auto p = scaled(*pico_side, l2 / lu);
      r.min_user_rate = m.value <= p.value ? m : p;
    }
  }
  return r;
}

MetricsReport SimulationResult::to_report() const {
  MetricsReport report;
  MetricsReport::Fields ci;
  auto& f = report.value;

  auto put = [](std::optional<double>& value, std::optional<double>& half, const EstimateWithCI& e) {
    value = e.value;
    half = e.half_width;
  };
  put(f.q_macro, ci.q_macro, mode_fraction[0]);
  put(f.q_pico, ci.q_pico, mode_fraction[1]);
  put(f.q_comp, ci.q_comp, mode_fraction[2]);

  static constexpr const char* kModeName[3] = {"macro", "pico", "comp"};
  using Member = std::optional<double> MetricsReport::Fields::*;
  static constexpr Member kOutage[3] = {&MetricsReport::Fields::outage_macro,
                                        &MetricsReport::Fields::outage_pico,
                                        &MetricsReport::Fields::outage_comp};
  static constexpr Member kRate[3] = {&MetricsReport::Fields::rate_macro,
                                      &MetricsReport::Fields::rate_pico,
                                      &MetricsReport::Fields::rate_comp};
  for (int m = 0; m < 3; ++m) {
    const auto count = outage[m].count;
    if (outage[m].sufficient()) {
      put(f.*kOutage[m], ci.*kOutage[m], outage[m]);
      put(f.*kRate[m], ci.*kRate[m], rate[m]);
    } else if (possible[m] || count > 0) {
      report.warnings.push_back(std::string("InsufficientModeSamples: ") + kModeName[m] +
                                " mode has " + std::to_string(count) + " samples (< " +
                                std::to_string(kMinModeSamples) +
                                "); its conditional outage and rate are withheld");
    }
  }
  put(f.overall_outage, ci.overall_outage, overall_outage);
  put(f.overall_rate, ci.overall_rate, overall_rate);
  if (macro_load) put(f.macro_load, ci.macro_load, *macro_load);
  if (pico_load) put(f.pico_load, ci.pico_load, *pico_load);
  if (min_user_rate) put(f.min_user_rate, ci.min_user_rate, *min_user_rate);
  if (resamples > 0) {
    report.warnings.push_back(std::to_string(resamples) +
                              " deployments were redrawn because a tier came out empty");
  }
  report.ci_half_width = ci;
  return report;
}

std::array<EstimateWithCI, 3> estimate_mode_fractions(const NetworkConfig& config,
                                                      const SimSettings& settings) {
  return simulate(Scheme::LaCtc, config, settings).mode_fraction;
}

}  // namespace lactc::sim
