#pragma once

#include "qutrit/integrator.hpp"
#include "qutrit/model.hpp"

#include <string>
#include <vector>

namespace qutrit {

/// J1 or J2 evaluated at a terminal state.
double eval_objective(const Objective& objective, const Vec9& xT);

/// Tr((rho - sigma)^2).
double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);

/// -Tr(rho ln rho) with 0 ln 0 = 0. Throws InvalidState if an eigenvalue is
/// below -1e-8.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

struct RenyiDivergence {
  double value = 0.0;
  /// False when alpha > 1 and supp(rho) is not contained in supp(sigma);
  /// value is then +inf.
  bool support_ok = true;
};

/// Petz-Renyi relative entropy (alpha - 1)^{-1} ln Tr(rho^alpha sigma^{1-alpha}).
/// Natural logarithm. alpha must lie in (0, 1) or (1, inf).
RenyiDivergence petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

inline constexpr double kDefaultRenyiAlpha = 0.5;

struct MetricSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
};

/// Time series on the cell edges of a trajectory: populations rho_11..rho_33,
/// hs_distance_sq to the target, overlap gap b - Tr(rho rho_target), entropy,
/// purity and the Petz-Renyi divergence to the target.
std::vector<MetricSeries> trajectory_metrics(const Trajectory& fwd, const Objective& objective,
                                             double renyi_alpha = kDefaultRenyiAlpha);

}  // namespace qutrit
