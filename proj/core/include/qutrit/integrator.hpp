#pragma once

#include "qutrit/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qutrit {

/// Embedded Runge-Kutta 5(4) (Dormand-Prince) settings.
struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  std::optional<double> max_step;

  void validate() const;
};

/// Raised when the step size underflows before reaching the end of a cell.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Number of initial-value problems solved. Passed explicitly to every
/// solver so that independent runs keep independent tallies.
class CauchyCounter {
 public:
  void increment() { ++count_; }
  std::size_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  std::size_t count_ = 0;
};

/// Solution of a 9-dimensional ODE on the uniform cell grid of a ControlGrid.
///
/// Every cell is integrated separately, so each cell owns its own run of
/// accepted step nodes (t, x, x') with both cell edges included. The
/// derivative may jump across cell edges; the state does not. Between nodes
/// the solution is reconstructed with cubic Hermite interpolation.
class Trajectory {
 public:
  Trajectory() = default;

  double final_time() const { return T_; }
  std::size_t cells() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  /// Cell edges t_0 = 0 < ... < t_N = T.
  std::vector<double> times() const;
  /// States at the cell edges, aligned with times().
  std::vector<Vec9> states() const;

  const Vec9& initial_state() const { return x_.front(); }
  const Vec9& final_state() const { return x_.back(); }

  /// Dense evaluation anywhere in [0, T].
  Vec9 at(double t) const;
  /// Dense evaluation restricted to cell i (t is clamped into the cell).
  Vec9 in_cell(std::size_t cell, double t) const;

  std::size_t node_count() const { return t_.size(); }
  const std::vector<double>& node_times() const { return t_; }
  const std::vector<Vec9>& node_states() const { return x_; }

  /// Right-hand side evaluated per cell: f(cell, t, x, dxdt).
  using CellRhs = std::function<void(std::size_t, double, const Vec9&, Vec9&)>;

  /// Integrates x' = f(cell, t, x) from x(0) = x0 over N uniform cells of [0, T].
  static Trajectory integrate(const CellRhs& rhs, const Vec9& x0, double T, std::size_t N,
                              const IntegratorConfig& cfg);

  /// Re-expresses a solution computed in reversed time s = T - t on the
  /// forward axis. Cell k of the reversed solution becomes cell N-1-k.
  Trajectory reversed() const;

 private:
  std::size_t cell_index(double t) const;

  double T_ = 0.0;
  std::vector<double> t_;
  std::vector<Vec9> x_;
  std::vector<Vec9> f_;
  std::vector<std::size_t> offsets_;  // cell i owns nodes [offsets_[i], offsets_[i+1])
};

}  // namespace qutrit
