#pragma once

#include "qutrit/integrator.hpp"
#include "qutrit/model.hpp"

#include <vector>

namespace qutrit {

/// Solves x' = (A + Bu u + Bn1 n1 + Bn2 n2) x, x(0) = x0, with the controls
/// held constant on each cell. Counts one Cauchy problem.
Trajectory forward_solve(const Generators& gens, const ControlGrid& grid, const Vec9& x0,
                         const IntegratorConfig& cfg, CauchyCounter& counter);

/// Integrates the master equation directly on 3x3 complex matrices,
///   rho' = -i [H0 + V u, rho] + L_n(rho),
/// with the two photon-bath dissipators for the 1-3 and 2-3 transitions.
/// Returns rho at the N+1 cell edges. Meant for validation only; does not
/// touch any Cauchy counter.
std::vector<DensityMatrix> complex_oracle_solve(const SystemParams& params, const ControlGrid& grid,
                                                const DensityMatrix& rho0,
                                                const IntegratorConfig& cfg);

/// Right-hand side of the complex master equation for fixed control values.
DensityMatrix master_equation_rhs(const SystemParams& params, double u, double n1, double n2,
                                  const DensityMatrix& rho);

}  // namespace qutrit
