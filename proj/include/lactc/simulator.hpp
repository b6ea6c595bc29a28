#pragma once

// Monte Carlo estimation of the same metrics as the analytic module. Every
// iteration draws its own deployment and fading from a counter-based stream
// keyed by (seed, iteration), so results do not depend on the worker count.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lactc/model.hpp"

namespace lactc::sim {

// ---------------------------------------------------------------------------
// Random numbers

/// Philox4x32-10 block cipher (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block encrypt(Block counter, Key key);
};

/// UniformRandomBitGenerator over one Philox counter stream. Stream `id`
/// selects the upper counter words; the lower words count blocks.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with mean 1.
  double exponential();

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t id_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
};

// ---------------------------------------------------------------------------
// Settings and deployments

enum class InterferenceModel { Independent, CoherentPairs };
std::string_view to_string(InterferenceModel model);
/// Accepts "independent" and "coherent-pairs" / "coherent_pairs".
InterferenceModel parse_interference_model(std::string_view text);

struct SimSettings {
  double window_half_width = 5000.0;
  std::uint64_t iterations = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  InterferenceModel interference = InterferenceModel::Independent;

  /// Throws std::invalid_argument for a non-positive window, zero iterations
  /// or zero workers.
  void check() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct NetworkRealization {
  std::vector<Point> macro;
  std::vector<Point> pico;
};

/// A tier with positive intensity came out empty.
class EmptyTier : public std::runtime_error {
 public:
  explicit EmptyTier(Tier tier);
  Tier tier() const { return tier_; }

 private:
  Tier tier_;
};

/// N ~ Poisson(intensity·(2·half_width)^2) uniform points in the window.
std::vector<Point> sample_ppp(double intensity, double half_width, RandomStream& rng);

NetworkRealization sample_realization(const NetworkConfig& config, double half_width,
                                      RandomStream& rng);

// ---------------------------------------------------------------------------
// Association and SINR

struct ModeSelection {
  Mode mode = Mode::NonCompMacro;
  /// Distances to the nearest BS of each tier (+inf when a zero-intensity tier is empty).
  double r1 = 0.0;
  double r2 = 0.0;
  /// Index of that BS in the realization, or npos.
  std::size_t macro_index = npos;
  std::size_t pico_index = npos;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Three-way LA-CTC split on P1 r1^-a1 / (P2 r2^-a2) against {1, beta};
/// ties go to the single-BS modes. Throws EmptyTier.
ModeSelection select_mode(const NetworkRealization& realization, const NetworkConfig& config);

/// Serving group a scheme picks: FC always uses both tiers, RE and Tr one
/// tier, LA-CTC follows select_mode.
Mode serving_mode(Scheme scheme, const ModeSelection& selection, const NetworkConfig& config);

struct SinrSample {
  Mode mode = Mode::NonCompMacro;
  double r1 = 0.0;
  double r2 = 0.0;
  double sinr = 0.0;
};

/// Draws fresh fading for the realization and returns the typical user's SINR.
SinrSample sample_sinr(const NetworkRealization& realization, Scheme scheme,
                       const NetworkConfig& config, RandomStream& rng,
                       InterferenceModel model = InterferenceModel::Independent);

// ---------------------------------------------------------------------------
// Estimates

/// Conditional estimates built from fewer samples than this are withheld.
inline constexpr std::uint64_t kMinModeSamples = 100;

struct EstimateWithCI {
  double value = 0.0;
  /// Half width of the 95% normal-approximation interval.
  double half_width = 0.0;
  std::uint64_t count = 0;

  bool sufficient() const { return count >= kMinModeSamples; }
};

struct SimulationResult {
  Scheme scheme = Scheme::LaCtc;
  std::uint64_t iterations = 0;
  /// Deployments redrawn because a tier was empty.
  std::uint64_t resamples = 0;

  /// Indexed by Mode. Fractions of iterations served in each mode.
  std::array<EstimateWithCI, 3> mode_fraction{};
  std::array<EstimateWithCI, 3> outage{};
  std::array<EstimateWithCI, 3> rate{};
  EstimateWithCI overall_outage;
  EstimateWithCI overall_rate;
  std::optional<EstimateWithCI> macro_load;
  std::optional<EstimateWithCI> pico_load;
  std::optional<EstimateWithCI> min_user_rate;
  /// Modes the scheme can use; a missing estimate for one of these is flagged.
  std::array<bool, 3> possible{true, true, true};

  /// Field values with CI half widths. Conditional estimates with fewer
  /// than kMinModeSamples samples are left out and reported as warnings.
  MetricsReport to_report() const;
};

/// Runs settings.iterations independent iterations at config.tau().
SimulationResult simulate(Scheme scheme, const NetworkConfig& config, const SimSettings& settings);

std::array<EstimateWithCI, 3> estimate_mode_fractions(const NetworkConfig& config,
                                                      const SimSettings& settings);

}  // namespace lactc::sim
