#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leray {

/// Exit status of a sweep whose fit misses its target.
inline constexpr int kSweepFailedExit = 2;

/// Integrates the configured run. Writes <output>/energy.csv,
/// <output>/summary.txt, <output>/checkpoint_<step>.bin every
/// checkpoint_every steps and <output>/final.bin. Returns 0; errors propagate
/// as leray::Error.
int cmd_run(const std::string& config_path, std::ostream& log);

/// Writes <output>/sweep.csv; returns kSweepFailedExit when the fit fails.
int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas,
                    std::ostream& log);
int cmd_sweep_n(const std::string& config_path, const std::vector<int>& orders, std::ostream& log);

/// Prints the multiplier table of the configured grid and filter to `out`.
int cmd_multiplier_table(const std::string& config_path, std::ostream& out);

struct ValidateOptions {
  /// Runs the skew-symmetry check with dealiasing disabled.
  bool inject_fault = false;
};

/// Runs the acceptance suite and prints one row per criterion; 0 iff all pass.
int cmd_validate(const ValidateOptions& opts, std::ostream& out);

}  // namespace leray
