#pragma once

#include "qutrit/integrator.hpp"
#include "qutrit/model.hpp"
#include "qutrit/optimizers.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qutrit {

/// Configuration problem. `line()` is 0 for errors not tied to a line;
/// `field()` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::string field = {})
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Everything needed to run one experiment.
struct ScenarioConfig {
  std::string name = "custom";
  SystemParams params;
  DensityMatrix rho0 = diagonal_state(1.0, 0.0, 0.0);
  DensityMatrix rho_target = diagonal_state(1.0, 0.0, 0.0);
  double T = 1.0;
  std::size_t N = 1000;
  ControlBounds bounds = ControlBounds::half_unbounded();
  ObjectiveKind objective = ObjectiveKind::SquaredDistance;
  /// Constant initial guess (u, n1, n2) on every cell.
  std::array<double, 3> c0{0.0, 0.0, 0.0};
  Method method = Method::GPM3;
  GpmConfig gpm;
  IntegratorConfig integrator;
  double renyi_alpha = 0.5;
  std::string output_dir = "out";

  /// Throws ConfigError naming the field that violates an invariant.
  void validate() const;

  Objective make_objective() const;
  Problem make_problem() const;
  ControlGrid initial_guess() const;
};

/// Parameter sets of the reproduced experiments: "5.1", "5.1-alpha5", "5.2a",
/// "5.2b", "5.2-nmax4", "5.2-nmax2-T1", "5.3".
std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ScenarioConfig preset(const std::string& name);

/// Parses the flat key-value format:
///
///   # comment
///   preset = 5.1            # optional base, applied before other keys
///   C13 = 0.5
///   rho0 = diag 0.8 0 0.2
///   rho_target = full 0.5 0.1+0.2i 0 0.1-0.2i 0.3 0 0 0 0.2
///   bounds = compact        # or half_unbounded
///   c0 = 1, 0, 0
///
/// Unknown keys, duplicate keys and malformed values are errors carrying the
/// line number.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Inverse of parse_config, used to record the effective configuration of a run.
std::string to_config_text(const ScenarioConfig& cfg);

}  // namespace qutrit
