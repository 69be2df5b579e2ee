#pragma once

#include "qutrit/metrics.hpp"
#include "qutrit/optimizers.hpp"
#include "qutrit/scenario.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qutrit {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitNotConverged = 2 };

// CSV writers. Header row, comma separator, 17 significant digits.
// Column schemas are documented in docs/file_formats.md.

/// iteration,objective,cauchy_problems
void write_history_csv(std::ostream& os, const RunReport& report);
/// t,u,n1,n2 with t the left edge of each cell.
void write_controls_csv(std::ostream& os, const ControlGrid& c);
/// t,x1..x9,rho11,rho22,rho33,entropy,purity,renyi,hs_distance_sq on cell edges.
void write_dynamics_csv(std::ostream& os, const Trajectory& fwd, const Objective& objective,
                        double renyi_alpha);
/// key: value lines.
void write_report(std::ostream& os, const ScenarioConfig& cfg, const RunReport& report);

struct OptimizeOutcome {
  RunReport report;
  int exit_code = kExitOk;
};

/// Runs cfg.method and writes history.csv, controls.csv, dynamics.csv,
/// report.txt and config.txt into cfg.output_dir.
OptimizeOutcome cmd_optimize(const ScenarioConfig& cfg, std::ostream& log);

/// Forward-only run of the initial guess; writes dynamics.csv and controls.csv.
int cmd_simulate(const ScenarioConfig& cfg, std::ostream& log);

struct SweepPoint {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<std::size_t> complexity;  // empty when the run did not converge
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ordered by (alpha, beta)
  std::vector<std::pair<double, LinearFit>> fits;  // one per alpha
};

/// beta = 0.1 + 0.05 j, j = 0..16.
std::vector<double> default_sweep_betas();

/// Least squares complexity ~ slope * beta + intercept over converged points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// GPM-2 runs for every (alpha, beta) pair on the scenario, executed on
/// `threads` workers (0 = hardware concurrency). Writes sweep.csv and
/// sweep_fit.txt into cfg.output_dir when `write_files` is set, plus one
/// history.csv per run under sweep_runs/.
SweepResult cmd_sweep_beta(const ScenarioConfig& cfg, const std::vector<double>& alphas,
                           const std::vector<double>& betas, std::size_t threads, bool write_files,
                           std::ostream& log);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidateOptions {
  /// Perturbs one drift-matrix entry of the realified model before the
  /// checks run; the realified-vs-complex comparison must then fail.
  bool corrupt_generator = false;
  unsigned seed = 20240527;
};

std::vector<ValidationCheck> cmd_validate(const ValidateOptions& opts, std::ostream& log);

}  // namespace qutrit
