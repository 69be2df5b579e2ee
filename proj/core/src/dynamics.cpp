#include "qutrit/dynamics.hpp"

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <boost/numeric/odeint/integrate/integrate_adaptive.hpp>

#include <array>
#include <complex>

namespace qutrit {

Trajectory forward_solve(const Generators& gens, const ControlGrid& grid, const Vec9& x0,
                         const IntegratorConfig& cfg, CauchyCounter& counter) {
  grid.validate();
  std::size_t cached_cell = static_cast<std::size_t>(-1);
  Mat9 M;
  auto rhs = [&](std::size_t cell, double, const Vec9& x, Vec9& dxdt) {
    if (cell != cached_cell) {
      M = gens.combined(grid.u[cell], grid.n1[cell], grid.n2[cell]);
      cached_cell = cell;
    }
    dxdt.noalias() = M * x;
  };
  Trajectory traj = Trajectory::integrate(rhs, x0, grid.T, grid.cells(), cfg);
  counter.increment();
  return traj;
}

DensityMatrix master_equation_rhs(const SystemParams& p, double u, double n1, double n2,
                                  const DensityMatrix& rho) {
  using cd = std::complex<double>;
  const cd I(0.0, 1.0);

  DensityMatrix H = DensityMatrix::Zero();
  H(1, 1) = p.E2;
  H(2, 2) = p.E3;
  H(0, 2) = H(2, 0) = p.V13 * u;
  H(1, 2) = H(2, 1) = p.V23 * u;

  DensityMatrix out = -I * (H * rho - rho * H);

  // A_j3 = V_j3 |j><3|
  const std::array<double, 2> C{p.C13, p.C23};
  const std::array<double, 2> n{n1, n2};
  const std::array<double, 2> V{p.V13, p.V23};
  for (int j = 0; j < 2; ++j) {
    DensityMatrix Aj = DensityMatrix::Zero();
    Aj(j, 2) = V[j];
    const DensityMatrix Ad = Aj.adjoint();
    const DensityMatrix AdA = Ad * Aj;
    const DensityMatrix AAd = Aj * Ad;
    out += C[j] * (n[j] + 1.0) * (2.0 * Aj * rho * Ad - (AdA * rho + rho * AdA));
    out += C[j] * n[j] * (2.0 * Ad * rho * Aj - (AAd * rho + rho * AAd));
  }
  return out;
}

std::vector<DensityMatrix> complex_oracle_solve(const SystemParams& params, const ControlGrid& grid,
                                                const DensityMatrix& rho0,
                                                const IntegratorConfig& cfg) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 18>;
  grid.validate();
  cfg.validate();

  auto pack = [](const DensityMatrix& m, State& s) {
    for (int i = 0; i < 9; ++i) {
      s[2 * i] = m(i / 3, i % 3).real();
      s[2 * i + 1] = m(i / 3, i % 3).imag();
    }
  };
  auto unpack = [](const State& s) {
    DensityMatrix m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = std::complex<double>(s[2 * i], s[2 * i + 1]);
    return m;
  };

  std::vector<DensityMatrix> out;
  out.reserve(grid.cells() + 1);
  out.push_back(rho0);
  State s;
  pack(rho0, s);
  for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
    const double u = grid.u[cell];
    const double n1 = grid.n1[cell];
    const double n2 = grid.n2[cell];
    auto system = [&](const State& x, State& dxdt, double) {
      pack(master_equation_rhs(params, u, n1, n2, unpack(x)), dxdt);
    };
    const double t0 = grid.grid_time(cell);
    const double t1 = grid.grid_time(cell + 1);
    auto stepper =
        odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, odeint::runge_kutta_dopri5<State>());
    const double dt0 = cfg.max_step ? std::min(*cfg.max_step, t1 - t0) : t1 - t0;
    odeint::integrate_adaptive(stepper, system, s, t0, t1, dt0);
    out.push_back(unpack(s));
  }
  return out;
}

}  // namespace qutrit
