#pragma once

#include "qutrit/adjoint.hpp"
#include "qutrit/integrator.hpp"
#include "qutrit/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qutrit {

enum class Method { GPM1, GPM2, GPM3, RKM };

std::string to_string(Method m);
/// Accepts "gpm1", "gpm-1", "GPM1", "rkm", ...
std::optional<Method> parse_method(const std::string& name);

/// Fixed step and momentum coefficients; never adapted during a run.
struct GpmConfig {
  double alpha = 1.0;
  double beta = 0.75;
  double theta = 0.1;
  double eps_stop = 1e-6;
  /// Upper bound on the number of evaluated iterates c^(0), c^(1), ...
  std::size_t max_iters = 20000;

  void validate() const;
};

/// Everything that stays fixed while the control is optimized.
struct Problem {
  SystemParams params;
  Generators gens;
  Vec9 x0 = Vec9::Zero();
  Objective objective;
  ControlBounds bounds;
  IntegratorConfig integrator;

  static Problem make(const SystemParams& params, const DensityMatrix& rho0,
                      const Objective& objective, const ControlBounds& bounds,
                      const IntegratorConfig& integrator = {});
};

struct HistoryRow {
  std::size_t iteration = 0;
  double objective = 0.0;
  std::size_t cauchy_problems = 0;  // cumulative
};

struct RunReport {
  Method method = Method::GPM1;
  std::vector<HistoryRow> history;
  std::size_t cauchy_problems = 0;
  ControlGrid final_control;
  Trajectory final_trajectory;
  bool converged = false;
  /// Lowest objective seen and the iterate that produced it.
  double best_objective = 0.0;
  ControlGrid best_control;

  double final_objective() const { return history.back().objective; }
};

/// Channelwise orthogonal projection onto the admissible set.
ControlGrid project(const ControlGrid& c, const ControlBounds& bounds);

/// Pr_Q(c_k - alpha grad).
ControlGrid gpm1_step(const ControlGrid& ck, const ControlGradient& grad, const GpmConfig& cfg,
                      const ControlBounds& bounds);

/// Pr_Q(c_k - alpha grad + beta (c_k - c_{k-1})).
ControlGrid gpm2_step(const ControlGrid& ck, const ControlGrid& ckm1, const ControlGradient& grad,
                      const GpmConfig& cfg, const ControlBounds& bounds);

/// Pr_Q(c_k - alpha grad + beta (c_k - c_{k-1}) + theta (c_{k-1} - c_{k-2})).
ControlGrid gpm3_step(const ControlGrid& ck, const ControlGrid& ckm1, const ControlGrid& ckm2,
                      const ControlGradient& grad, const GpmConfig& cfg,
                      const ControlBounds& bounds);

struct RkmStep {
  ControlGrid control;
  Trajectory trajectory;
};

/// One regularized Krotov iteration. Integrates the state under the feedback
///   u(x, t)  = Pr[-mu, mu](u_k(t) + alpha K^u(y_k(t), x)),
///   nj(x, t) = Pr[0, n_max](nj_k(t) + alpha K^{nj}(y_k(t), x)),
/// then cell-averages the feedback along the new trajectory. Counts one
/// Cauchy problem.
RkmStep rkm_step(const ControlGrid& ck, const AdjointTrajectory& adj_k, double alpha,
                 const Problem& problem, CauchyCounter& counter);

/// Sees every evaluated iterate: index k, control c^(k) and its state trajectory.
using IterateObserver = std::function<void(std::size_t, const ControlGrid&, const Trajectory&)>;

/// Iterates until I(c) <= eps_stop or max_iters iterates have been evaluated.
/// c0 is projected onto the admissible set first.
RunReport run(Method method, const Problem& problem, const ControlGrid& c0, const GpmConfig& cfg,
              const IterateObserver& observe = {});

}  // namespace qutrit
