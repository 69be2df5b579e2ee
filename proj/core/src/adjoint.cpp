#include "qutrit/adjoint.hpp"

namespace qutrit {

Vec9 transversality(const Objective& objective, const Vec9& xT) {
  const Vec9 beta = beta_weights();
  if (objective.kind == ObjectiveKind::Overlap) {
    return beta.cwiseProduct(objective.x_target);
  }
  return -2.0 * beta.cwiseProduct(xT - objective.x_target);
}

AdjointTrajectory adjoint_solve(const Generators& gens, const ControlGrid& grid,
                                const Objective& objective, const Trajectory& fwd,
                                const IntegratorConfig& cfg, CauchyCounter& counter) {
  grid.validate();
  if (fwd.cells() != grid.cells()) {
    throw InvalidArgument("forward trajectory and control grid have different cell counts");
  }
  const std::size_t N = grid.cells();
  const Vec9 yT = transversality(objective, fwd.final_state());

  // Reversed time s = T - t turns the terminal-value problem into an
  // initial-value one: dy/ds = M^T y, with reversed cell k = forward cell N-1-k.
  std::size_t cached_cell = static_cast<std::size_t>(-1);
  Mat9 Mt;
  auto rhs = [&](std::size_t rcell, double, const Vec9& y, Vec9& dyds) {
    if (rcell != cached_cell) {
      const std::size_t cell = N - 1 - rcell;
      Mt = gens.combined(grid.u[cell], grid.n1[cell], grid.n2[cell]).transpose();
      cached_cell = rcell;
    }
    dyds.noalias() = Mt * y;
  };
  Trajectory reversed = Trajectory::integrate(rhs, yT, grid.T, N, cfg);
  counter.increment();
  return reversed.reversed();
}

SwitchingValues switching_values(const Vec9& X, const Vec9& Y, const SystemParams& p) {
  // one-based aliases keep the polynomials readable
  const double x1 = X[0], x2 = X[1], x3 = X[2], x4 = X[3], x5 = X[4], x6 = X[5], x7 = X[6],
               x8 = X[7], x9 = X[8];
  const double y1 = Y[0], y2 = Y[1], y3 = Y[2], y4 = Y[3], y5 = Y[4], y6 = Y[5], y7 = Y[6],
               y8 = Y[7], y9 = Y[8];
  SwitchingValues k;
  k.ku = p.V13 * (-2 * x5 * y1 - x8 * y2 - x7 * y3 + x1 * y5 - x9 * y5 + x3 * y7 + x2 * y8 +
                  2 * x5 * y9) +
         p.V23 * (-x5 * y2 + x4 * y3 - x3 * y4 + x2 * y5 - 2 * x8 * y6 + x6 * y8 - x9 * y8 +
                  2 * x8 * y9);
  k.kn1 = -p.C13 * p.V13 * p.V13 *
          (-2 * x9 * y1 + x2 * y2 + x3 * y3 + 2 * x4 * y4 + 2 * x5 * y5 + x7 * y7 + x8 * y8 +
           2 * x1 * (y1 - y9) + 2 * x9 * y9);
  k.kn2 = -p.C23 * p.V23 * p.V23 *
          (x2 * y2 + x3 * y3 + x4 * y4 + x5 * y5 + 2 * x6 * y6 - 2 * x9 * y6 + 2 * x7 * y7 +
           2 * x8 * y8 - 2 * x6 * y9 + 2 * x9 * y9);
  return k;
}

SwitchingValues switching_values(const Vec9& x, const Vec9& y, const Generators& gens) {
  return {y.dot(gens.Bu * x), y.dot(gens.Bn1 * x), y.dot(gens.Bn2 * x)};
}

ControlGradient gradient(const SystemParams& params, const ControlGrid& grid,
                         const Trajectory& fwd, const AdjointTrajectory& adj) {
  const std::size_t N = grid.cells();
  if (fwd.cells() != N || adj.cells() != N) {
    throw InvalidArgument("trajectories and control grid have different cell counts");
  }
  ControlGradient g;
  g.gu.resize(N);
  g.gn1.resize(N);
  g.gn2.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t0 = grid.grid_time(i);
    const double h = grid.grid_time(i + 1) - t0;
    SwitchingValues avg;
    for (int q = 0; q < 3; ++q) {
      const double t = t0 + kGaussNodes[q] * h;
      const SwitchingValues k = switching_values(fwd.in_cell(i, t), adj.in_cell(i, t), params);
      avg.ku += kGaussWeights[q] * k.ku;
      avg.kn1 += kGaussWeights[q] * k.kn1;
      avg.kn2 += kGaussWeights[q] * k.kn2;
    }
    g.gu[i] = -avg.ku;
    g.gn1[i] = -avg.kn1;
    g.gn2[i] = -avg.kn2;
  }
  return g;
}

}  // namespace qutrit
