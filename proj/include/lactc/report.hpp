#pragma once

// Config files, JSON reports and sweep CSV.
//
// Config files are JSON objects with flat keys:
//   macro.power_dbm, macro.intensity_per_m2, macro.alpha,
//   pico.power_dbm, pico.intensity_per_m2, pico.alpha,
//   noise_dbm (null = noiseless), beta_db | beta_linear, tau_db,
//   user_intensity_per_m2
// Missing keys take the default deployment's values; a "$comment" entry is
// ignored.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lactc/model.hpp"
#include "lactc/simulator.hpp"

namespace lactc::io {

/// The file could not be read or is not a JSON document.
class ConfigReadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The document is JSON but breaks the schema: unknown key, non-numeric
/// value, or both beta_db and beta_linear given.
class ConfigSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a config document. Throws ConfigReadError,
/// ConfigSchemaError or InvalidConfig.
NetworkConfig parse_config(std::string_view json_text);
NetworkConfig load_config(const std::string& path);

/// Every key of the schema, all defaults expanded; doubles at full precision.
std::string config_to_json(const NetworkConfig& config, int indent = -1);

/// Run parameters echoed into simulation reports. Worker count is left out
/// on purpose so reports do not depend on it.
struct SimulationEcho {
  sim::SimSettings settings;
  std::uint64_t resamples = 0;
};

std::string report_json(Scheme scheme, std::string_view engine, const NetworkConfig& config,
                        const MetricsReport& report,
                        const std::optional<SimulationEcho>& simulation = std::nullopt);

/// 6 significant digits, '.' as decimal point, independent of the locale.
std::string format_csv_number(double value);

inline constexpr std::string_view kSweepHeader = "variable,scheme,metric,value,ci_half_width";

struct SweepRow {
  double variable = 0.0;
  Scheme scheme = Scheme::LaCtc;
  std::string metric;
  /// Empty when the scheme has no such quantity (e.g. outage_comp under RE).
  std::optional<double> value;
  std::optional<double> ci_half_width;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace lactc::io
