#include "qutrit/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace qutrit {

namespace {

using cd = std::complex<double>;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double hermiticity_defect(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix& rho) {
  const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void validate_density_matrix(const DensityMatrix& rho, const StateTolerances& tol) {
  if (!rho.allFinite()) throw InvalidState("density matrix has non-finite entries");
  const double herm = hermiticity_defect(rho);
  if (herm > tol.hermiticity) {
    throw InvalidState("density matrix is not Hermitian (defect " + fmt_double(herm) + ")");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw InvalidState("density matrix trace is " + fmt_double(tr) + ", expected 1");
  }
  const double lmin = min_eigenvalue(rho);
  if (lmin < tol.min_eigenvalue) {
    throw InvalidState("density matrix has negative eigenvalue " + fmt_double(lmin));
  }
}

DensityMatrix diagonal_state(double p1, double p2, double p3) {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(0, 0) = p1;
  rho(1, 1) = p2;
  rho(2, 2) = p3;
  return rho;
}

Vec9 realify(const DensityMatrix& rho, double hermiticity_tol) {
  const double herm = hermiticity_defect(rho);
  if (!(herm <= hermiticity_tol)) {
    throw InvalidState("cannot realify a non-Hermitian matrix (defect " + fmt_double(herm) + ")");
  }
  Vec9 x;
  x << rho(0, 0).real(), rho(0, 1).real(), rho(0, 1).imag(), rho(0, 2).real(), rho(0, 2).imag(),
      rho(1, 1).real(), rho(1, 2).real(), rho(1, 2).imag(), rho(2, 2).real();
  return x;
}

DensityMatrix derealify(const Vec9& x) {
  DensityMatrix rho;
  rho(0, 0) = cd(x[0], 0.0);
  rho(0, 1) = cd(x[1], x[2]);
  rho(0, 2) = cd(x[3], x[4]);
  rho(1, 0) = cd(x[1], -x[2]);
  rho(1, 1) = cd(x[5], 0.0);
  rho(1, 2) = cd(x[6], x[7]);
  rho(2, 0) = cd(x[3], -x[4]);
  rho(2, 1) = cd(x[6], -x[7]);
  rho(2, 2) = cd(x[8], 0.0);
  return rho;
}

double overlap_bound(const DensityMatrix& rho_target) {
  const DensityMatrix herm = 0.5 * (rho_target + rho_target.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

void SystemParams::validate() const {
  for (double v : {E2, E3, V13, V23, C13, C23}) {
    if (!std::isfinite(v)) throw InvalidArgument("system parameters must be finite");
  }
  if (C13 < 0.0) throw InvalidArgument("C13 must be nonnegative");
  if (C23 < 0.0) throw InvalidArgument("C23 must be nonnegative");
}

// Coefficients are read off the nine realified equations of motion; index k
// below is x_{k+1}.
Generators build_generators(const SystemParams& p) {
  p.validate();
  const double a = p.C13 * p.V13 * p.V13;
  const double c = p.C23 * p.V23 * p.V23;
  const double g = a + c;

  Generators G;
  Mat9& A = G.A;
  Mat9& Bu = G.Bu;
  Mat9& B1 = G.Bn1;
  Mat9& B2 = G.Bn2;

  // x1
  A(0, 8) = 2 * a;
  Bu(0, 4) = -2 * p.V13;
  B1(0, 8) = 2 * a;
  B1(0, 0) = -2 * a;
  // x2
  A(1, 2) = -p.E2;
  Bu(1, 4) = -p.V23;
  Bu(1, 7) = -p.V13;
  B1(1, 1) = -a;
  B2(1, 1) = -c;
  // x3
  A(2, 1) = p.E2;
  Bu(2, 3) = p.V23;
  Bu(2, 6) = -p.V13;
  B1(2, 2) = -a;
  B2(2, 2) = -c;
  // x4
  A(3, 4) = -p.E3;
  A(3, 3) = -g;
  Bu(3, 2) = -p.V23;
  B1(3, 3) = -2 * a;
  B2(3, 3) = -c;
  // x5
  A(4, 3) = p.E3;
  A(4, 4) = -g;
  Bu(4, 0) = p.V13;
  Bu(4, 8) = -p.V13;
  Bu(4, 1) = p.V23;
  B1(4, 4) = -2 * a;
  B2(4, 4) = -c;
  // x6
  A(5, 8) = 2 * c;
  Bu(5, 7) = -2 * p.V23;
  B2(5, 8) = 2 * c;
  B2(5, 5) = -2 * c;
  // x7
  A(6, 6) = -g;
  A(6, 7) = p.E2 - p.E3;
  Bu(6, 2) = p.V13;
  B1(6, 6) = -a;
  B2(6, 6) = -2 * c;
  // x8
  A(7, 6) = p.E3 - p.E2;
  A(7, 7) = -g;
  Bu(7, 1) = p.V13;
  Bu(7, 5) = p.V23;
  Bu(7, 8) = -p.V23;
  B1(7, 7) = -a;
  B2(7, 7) = -2 * c;
  // x9
  A(8, 8) = -2 * g;
  Bu(8, 4) = 2 * p.V13;
  Bu(8, 7) = 2 * p.V23;
  B1(8, 0) = 2 * a;
  B1(8, 8) = -2 * a;
  B2(8, 5) = 2 * c;
  B2(8, 8) = -2 * c;

  return G;
}

ControlGrid ControlGrid::constant(double T, std::size_t N, double u, double n1, double n2) {
  ControlGrid c;
  c.T = T;
  c.u.assign(N, u);
  c.n1.assign(N, n1);
  c.n2.assign(N, n2);
  return c;
}

std::size_t ControlGrid::cell_of(double t) const {
  const std::size_t N = cells();
  if (t <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(std::floor(t / T * static_cast<double>(N)));
  return std::min(i, N - 1);
}

void ControlGrid::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("final time T must be positive");
  if (u.empty()) throw InvalidArgument("control grid must have at least one cell");
  if (n1.size() != u.size() || n2.size() != u.size()) {
    throw InvalidArgument("control channels u, n1, n2 must have the same number of cells");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(n1[i]) || !std::isfinite(n2[i])) {
      throw InvalidArgument("control value in cell " + std::to_string(i) + " is not finite");
    }
    if (n1[i] < 0.0 || n2[i] < 0.0) {
      throw InvalidArgument("incoherent control negative in cell " + std::to_string(i));
    }
  }
}

ControlBounds ControlBounds::compact(double mu, double n_max) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(n_max > 0.0)) throw InvalidArgument("n_max must be positive");
  return {BoundsKind::CompactBox, mu, n_max};
}

double ControlBounds::clamp_u(double u) const {
  if (kind == BoundsKind::HalfUnbounded) return u;
  return std::clamp(u, -mu, mu);
}

double ControlBounds::clamp_n(double n) const {
  if (kind == BoundsKind::HalfUnbounded) return std::max(n, 0.0);
  return std::clamp(n, 0.0, n_max);
}

bool ControlBounds::admits(double u, double n1, double n2) const {
  return clamp_u(u) == u && clamp_n(n1) == n1 && clamp_n(n2) == n2;
}

bool ControlBounds::admits(const ControlGrid& c) const {
  for (std::size_t i = 0; i < c.cells(); ++i) {
    if (!admits(c.u[i], c.n1[i], c.n2[i])) return false;
  }
  return true;
}

Objective Objective::overlap(const DensityMatrix& rho_target) {
  Objective obj;
  obj.kind = ObjectiveKind::Overlap;
  obj.x_target = realify(rho_target);
  obj.b = overlap_bound(rho_target);
  return obj;
}

Objective Objective::squared_distance(const DensityMatrix& rho_target) {
  Objective obj;
  obj.kind = ObjectiveKind::SquaredDistance;
  obj.x_target = realify(rho_target);
  return obj;
}

std::string to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::Overlap ? "J1" : "J2";
}

}  // namespace qutrit
