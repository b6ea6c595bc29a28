#pragma once

// The lactc command line, callable in-process so tests can drive it.

#include <iosfwd>
#include <string>
#include <vector>

#include "lactc/model.hpp"

namespace lactc::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kNumericalError = 3,
  /// `validate` ran, but at least one point disagreed beyond tolerance.
  kCrossCheckFailed = 4,
};

enum class SweepVariable { BetaDb, TauDb, PicoIntensityRatio, Alpha1, Alpha2 };

SweepVariable parse_sweep_variable(const std::string& name);

/// Config with one sweep coordinate replaced. pico_intensity_ratio sets
/// lambda2 = value * lambda1.
NetworkConfig apply_sweep(const NetworkConfig& base, SweepVariable variable, double value);

/// Explicit comma-separated values, or "start:stop:count" for a linear grid.
std::vector<double> parse_grid(const std::string& text);

/// Runs one command line; output goes to `out` unless --output is given, log
/// lines and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lactc::cli
