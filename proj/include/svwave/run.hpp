#ifndef SVWAVE_RUN_HPP
#define SVWAVE_RUN_HPP

#include <iosfwd>
#include <string>

#include "svwave/config.hpp"

namespace svwave {

/// Outcome of one simulation run. exit_code follows the CLI convention:
/// 0 success, 1 numerical failure (non-convergent site solve or non-finite
/// observable), 2 configuration failure (including admissibility refusal,
/// which is reported before any file is written).
struct RunResult {
  int exit_code = 2;
  std::string status;   // "ok", "refused", "step_failure",
                        // "non_finite_observable", "config_error"
  std::string message;  // detail for non-ok outcomes
  double initial_energy = 0.0;
  double initial_charge_raw = 0.0;
  double max_energy_drift_rel = 0.0;   // normalized by max(|E0|, eps^n)
  double max_charge_drift_rel = 0.0;   // normalized by max(|Q0|, eps^n)
  long max_solver_iterations = 0;
  double wall_time_s = 0.0;
  long rows_written = 0;
  std::string series_path;   // empty when the run was refused
  std::string summary_path;  // empty when the run was refused
};

/// Executes a configured run: admissibility gate, initial data, `steps` time
/// steps with observables monitored at every step, CSV series, optional
/// snapshots, and a summary JSON that embeds the fully-resolved config.
/// Progress notes go to log, failures to err. Does not throw on config or
/// numerical failure; the result carries the exit code.
RunResult run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace svwave

#endif
