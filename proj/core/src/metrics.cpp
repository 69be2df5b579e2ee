#include "qutrit/metrics.hpp"

#include <cmath>
#include <limits>

namespace qutrit {

namespace {

constexpr double kEigenFloor = 1e-12;

struct Spectrum {
  Eigen::Vector3d values;
  Eigen::Matrix3cd vectors;
};

Spectrum spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (rho + rho.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

// V diag(f(lambda)) V^*, eigenvalues below the floor treated as exact zeros.
template <class F>
DensityMatrix spectral_apply(const Spectrum& s, F&& f) {
  Eigen::Vector3cd d;
  for (int i = 0; i < 3; ++i) {
    const double lam = s.values[i] < kEigenFloor ? 0.0 : s.values[i];
    d[i] = f(lam);
  }
  return s.vectors * d.asDiagonal() * s.vectors.adjoint();
}

}  // namespace

double eval_objective(const Objective& objective, const Vec9& xT) {
  const Vec9 beta = beta_weights();
  if (objective.kind == ObjectiveKind::Overlap) {
    return objective.b - beta.cwiseProduct(objective.x_target).dot(xT);
  }
  const Vec9 d = xT - objective.x_target;
  return beta.dot(d.cwiseProduct(d));
}

double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const DensityMatrix d = rho - sigma;
  return (d * d).trace().real();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Spectrum s = spectrum(rho);
  double S = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double lam = s.values[i];
    if (lam < -1e-8) throw InvalidState("entropy of a state with a negative eigenvalue");
    if (lam > kEigenFloor) S -= lam * std::log(lam);
  }
  return S;
}

double purity(const DensityMatrix& rho) { return (rho * rho).trace().real(); }

RenyiDivergence petz_renyi(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw InvalidArgument("Renyi order must lie in (0, 1) or (1, inf)");
  }
  const Spectrum sr = spectrum(rho);
  const Spectrum ss = spectrum(sigma);
  RenyiDivergence out;

  if (alpha > 1.0) {
    // the negative power of sigma only exists on its support
    for (int i = 0; i < 3; ++i) {
      if (ss.values[i] >= kEigenFloor) continue;
      const Eigen::Vector3cd v = ss.vectors.col(i);
      const double leak = (v.adjoint() * rho * v)(0, 0).real();
      if (leak > kEigenFloor) {
        out.value = std::numeric_limits<double>::infinity();
        out.support_ok = false;
        return out;
      }
    }
  }

  const DensityMatrix ra = spectral_apply(sr, [alpha](double l) {
    return l == 0.0 ? std::complex<double>(0.0) : std::complex<double>(std::pow(l, alpha));
  });
  const DensityMatrix sb = spectral_apply(ss, [alpha](double l) {
    return l == 0.0 ? std::complex<double>(0.0) : std::complex<double>(std::pow(l, 1.0 - alpha));
  });
  const double tr = (ra * sb).trace().real();
  if (!(tr > 0.0)) {
    // orthogonal supports: Tr = 0 and the divergence is infinite
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = std::log(tr) / (alpha - 1.0);
  return out;
}

std::vector<MetricSeries> trajectory_metrics(const Trajectory& fwd, const Objective& objective,
                                             double renyi_alpha) {
  const std::vector<double> times = fwd.times();
  const std::vector<Vec9> states = fwd.states();
  const DensityMatrix target = derealify(objective.x_target);
  const double b = objective.kind == ObjectiveKind::Overlap ? objective.b : overlap_bound(target);

  std::vector<MetricSeries> out{{"rho11", times, {}},   {"rho22", times, {}},
                                {"rho33", times, {}},   {"hs_distance_sq", times, {}},
                                {"overlap_gap", times, {}}, {"entropy", times, {}},
                                {"purity", times, {}},  {"renyi", times, {}}};
  for (auto& s : out) s.values.reserve(times.size());
  for (const Vec9& x : states) {
    const DensityMatrix rho = derealify(x);
    out[0].values.push_back(x[0]);
    out[1].values.push_back(x[5]);
    out[2].values.push_back(x[8]);
    out[3].values.push_back(hs_distance_sq(rho, target));
    out[4].values.push_back(b - (rho * target).trace().real());
    out[5].values.push_back(von_neumann_entropy(rho));
    out[6].values.push_back(purity(rho));
    out[7].values.push_back(petz_renyi(rho, target, renyi_alpha).value);
  }
  return out;
}

}  // namespace qutrit
