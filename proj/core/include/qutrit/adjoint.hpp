#pragma once

#include "qutrit/integrator.hpp"
#include "qutrit/model.hpp"

#include <vector>

namespace qutrit {

/// Costate trajectory y(t). Shares the layout of a state trajectory but is
/// not a density matrix and is not trace-normalized.
using AdjointTrajectory = Trajectory;

/// Terminal costate y(T) = -grad F(x(T)).
Vec9 transversality(const Objective& objective, const Vec9& xT);

/// Solves y' = -(A + Bu u + Bn1 n1 + Bn2 n2)^T y backward from
/// y(T) = transversality(objective, fwd.final_state()). Counts one Cauchy problem.
AdjointTrajectory adjoint_solve(const Generators& gens, const ControlGrid& grid,
                                const Objective& objective, const Trajectory& fwd,
                                const IntegratorConfig& cfg, CauchyCounter& counter);

/// Values of the switching functions K^u, K^{n1}, K^{n2} at (x, y).
struct SwitchingValues {
  double ku = 0.0;
  double kn1 = 0.0;
  double kn2 = 0.0;
};

/// Closed-form polynomials in (x, y).
SwitchingValues switching_values(const Vec9& x, const Vec9& y, const SystemParams& params);

/// The same quantities as bilinear forms <y, B x> of the generator matrices.
SwitchingValues switching_values(const Vec9& x, const Vec9& y, const Generators& gens);

/// Per-cell L2 gradient of the objective with respect to (u, n1, n2). Each
/// entry is the cell average of -K, so dI/dc_i = cell_width * g_i.
struct ControlGradient {
  std::vector<double> gu;
  std::vector<double> gn1;
  std::vector<double> gn2;

  std::size_t cells() const { return gu.size(); }
};

/// Three-point Gauss-Legendre nodes on [0, 1] and their weights.
inline constexpr double kGaussNodes[3] = {0.11270166537925831, 0.5, 0.88729833462074169};
inline constexpr double kGaussWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

ControlGradient gradient(const SystemParams& params, const ControlGrid& grid,
                         const Trajectory& fwd, const AdjointTrajectory& adj);

}  // namespace qutrit
