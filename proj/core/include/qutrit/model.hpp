#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qutrit {

/// Real 9-vector in the layout (x1..x9) of the density-matrix parameterization.
/// Used for states x(t) and for costates y(t) alike.
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using DensityMatrix = Eigen::Matrix3cd;

/// Thrown when a matrix fails a density-matrix validity check.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for inconsistent or out-of-range configuration values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StateTolerances {
  double hermiticity = 1e-9;
  double trace = 1e-9;
  double min_eigenvalue = -1e-8;
};

/// Throws InvalidState naming the violated property.
void validate_density_matrix(const DensityMatrix& rho, const StateTolerances& tol = {});

/// Largest |rho(i,j) - conj(rho(j,i))|.
double hermiticity_defect(const DensityMatrix& rho);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const DensityMatrix& rho);

DensityMatrix diagonal_state(double p1, double p2, double p3);

/// rho -> x. Rejects rho whose Hermiticity defect exceeds `hermiticity_tol`.
Vec9 realify(const DensityMatrix& rho, double hermiticity_tol = 1e-9);

/// x -> rho. Accepts any 9-vector; realify(derealify(x)) == x bitwise.
DensityMatrix derealify(const Vec9& x);

/// x1 + x6 + x9, the trace of derealify(x).
inline double trace_of(const Vec9& x) { return x[0] + x[5] + x[8]; }

/// Largest eigenvalue of rho_target; the upper bound of Tr(rho rho_target).
double overlap_bound(const DensityMatrix& rho_target);

/// Lambda-atom parameters. Energies in units with hbar = 1; couplings assumed real.
struct SystemParams {
  double E2 = 1.0;
  double E3 = 2.5;
  double V13 = 1.0;
  double V23 = 1.7;
  double C13 = 0.5;
  double C23 = 0.3;

  void validate() const;
};

/// Constant matrices of x' = (A + Bu u + Bn1 n1 + Bn2 n2) x.
struct Generators {
  Mat9 A = Mat9::Zero();
  Mat9 Bu = Mat9::Zero();
  Mat9 Bn1 = Mat9::Zero();
  Mat9 Bn2 = Mat9::Zero();

  Mat9 combined(double u, double n1, double n2) const {
    return A + u * Bu + n1 * Bn1 + n2 * Bn2;
  }
};

Generators build_generators(const SystemParams& params);

/// Piecewise-constant controls on the uniform grid t_i = i T / N.
struct ControlGrid {
  double T = 1.0;
  std::vector<double> u;
  std::vector<double> n1;
  std::vector<double> n2;

  static ControlGrid constant(double T, std::size_t N, double u, double n1, double n2);

  std::size_t cells() const { return u.size(); }
  double cell_width() const { return T / static_cast<double>(cells()); }
  /// Left edge of cell i; grid_time(N) == T exactly.
  double grid_time(std::size_t i) const {
    return i == cells() ? T : T * static_cast<double>(i) / static_cast<double>(cells());
  }
  /// Cell containing t, with t == T mapped to the last cell.
  std::size_t cell_of(double t) const;

  /// Checks sizes, T > 0 and n_j >= 0.
  void validate() const;
};

enum class BoundsKind { HalfUnbounded, CompactBox };

/// Admissible control set: R x [0, inf)^2 or [-mu, mu] x [0, n_max]^2.
struct ControlBounds {
  BoundsKind kind = BoundsKind::HalfUnbounded;
  double mu = 0.0;
  double n_max = 0.0;

  static ControlBounds half_unbounded() { return {}; }
  static ControlBounds compact(double mu, double n_max);

  double clamp_u(double u) const;
  double clamp_n(double n) const;
  bool admits(double u, double n1, double n2) const;
  bool admits(const ControlGrid& c) const;
};

enum class ObjectiveKind { Overlap, SquaredDistance };

/// Weights making sum_j beta_j a_j b_j equal Tr(derealify(a) derealify(b)).
inline constexpr std::array<double, 9> kBetaWeights{1, 2, 2, 2, 2, 1, 2, 2, 1};

inline Vec9 beta_weights() {
  Vec9 b;
  for (int j = 0; j < 9; ++j) b[j] = kBetaWeights[j];
  return b;
}

/// J1 = b - <x, beta o x_target>   or   J2 = sum beta_j (x_j - x_target_j)^2.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::SquaredDistance;
  Vec9 x_target = Vec9::Zero();
  double b = 0.0;  // only meaningful for Overlap

  static Objective overlap(const DensityMatrix& rho_target);
  static Objective squared_distance(const DensityMatrix& rho_target);
};

std::string to_string(ObjectiveKind kind);

}  // namespace qutrit
