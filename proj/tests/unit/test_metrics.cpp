#include "qutrit/dynamics.hpp"
#include "qutrit/metrics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace qutrit;

namespace {

DensityMatrix pure(const Eigen::Vector3cd& v) {
  const Eigen::Vector3cd n = v.normalized();
  return n * n.adjoint();
}

Eigen::Matrix3cd random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::Matrix3cd g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = {d(rng), d(rng)};
  return Eigen::HouseholderQR<Eigen::Matrix3cd>(g).householderQ();
}

// Commuting states: Petz-Renyi reduces to the classical formula.
double classical_renyi(const double p[3], const double q[3], double alpha) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (p[i] > 0 && q[i] > 0) s += std::pow(p[i], alpha) * std::pow(q[i], 1 - alpha);
  }
  return std::log(s) / (alpha - 1);
}

}  // namespace

TEST(Objective, SquaredDistanceExample) {
  const Objective j2 = Objective::squared_distance(diagonal_state(0.5, 0.3, 0.2));
  EXPECT_NEAR(eval_objective(j2, realify(diagonal_state(0.8, 0.0, 0.2))), 0.18, 1e-15);
  EXPECT_EQ(eval_objective(j2, j2.x_target), 0.0);
}

TEST(Objective, OverlapAtMixedTarget) {
  const Objective j1 = Objective::overlap(diagonal_state(0.3, 0.7, 0.0));
  EXPECT_NEAR(eval_objective(j1, j1.x_target), 0.12, 1e-15);
}

TEST(Objective, MatchesMatrixTraces) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix rho = test::random_density(rng);
    const DensityMatrix tgt = test::random_density(rng);
    EXPECT_NEAR(eval_objective(Objective::squared_distance(tgt), realify(rho)), hs_distance_sq(rho, tgt), 1e-14);
    EXPECT_NEAR(eval_objective(Objective::overlap(tgt), realify(rho)),
                overlap_bound(tgt) - (rho * tgt).trace().real(), 1e-14);
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(pure(Eigen::Vector3cd(1.0, 2.0, -1.0))), 0.0, 1e-10);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::Identity() / 3.0), std::log(3.0), 1e-14);
  const double expected = -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
  EXPECT_NEAR(von_neumann_entropy(diagonal_state(0.5, 0.3, 0.2)), expected, 1e-14);
  EXPECT_NEAR(expected, 1.0297, 5e-5);
}

TEST(Entropy, UnitarilyInvariant) {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = test::random_density(rng);
  const Eigen::Matrix3cd U = random_unitary(rng);
  EXPECT_NEAR(von_neumann_entropy(U * rho * U.adjoint()), von_neumann_entropy(rho), 1e-12);
}

TEST(Entropy, RejectsNegativeSpectrum) {
  EXPECT_THROW(von_neumann_entropy(diagonal_state(1.1, 0.0, -0.1)), InvalidState);
}

TEST(Purity, Examples) {
  EXPECT_NEAR(purity(pure(Eigen::Vector3cd(0.0, 1.0, 1.0))), 1.0, 1e-14);
  EXPECT_NEAR(purity(DensityMatrix::Identity() / 3.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(purity(diagonal_state(0.3, 0.7, 0.0)), 0.58, 1e-15);
}

TEST(Renyi, IdenticalStatesGiveZero) {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = test::random_density(rng);
  for (double a : {0.3, 0.5, 2.0}) EXPECT_NEAR(petz_renyi(rho, rho, a).value, 0.0, 1e-10);
}

TEST(Renyi, CommutingStatesMatchClassicalFormula) {
  const double p[3] = {0.5, 0.3, 0.2};
  const double q[3] = {0.3, 0.7, 0.0};
  const RenyiDivergence r = petz_renyi(diagonal_state(0.5, 0.3, 0.2), diagonal_state(0.3, 0.7, 0.0), 0.5);
  EXPECT_TRUE(r.support_ok);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_NEAR(r.value, classical_renyi(p, q, 0.5), 1e-10);
  const double q2[3] = {0.2, 0.2, 0.6};
  EXPECT_NEAR(petz_renyi(diagonal_state(0.5, 0.3, 0.2), diagonal_state(0.2, 0.2, 0.6), 2.0).value,
              classical_renyi(p, q2, 2.0), 1e-10);
}

TEST(Renyi, UnitarilyInvariant) {
  std::mt19937_64 rng(4);
  const DensityMatrix rho = test::random_density(rng);
  const DensityMatrix sigma = test::random_density(rng);
  const Eigen::Matrix3cd U = random_unitary(rng);
  const double a = petz_renyi(rho, sigma, 0.5).value;
  const double b = petz_renyi(U * rho * U.adjoint(), U * sigma * U.adjoint(), 0.5).value;
  EXPECT_NEAR(a, b, 1e-10);
  EXPECT_GT(a, 0.0);
}

TEST(Renyi, SupportViolationAboveOne) {
  const RenyiDivergence r = petz_renyi(diagonal_state(0.5, 0.3, 0.2), diagonal_state(0.3, 0.7, 0.0), 2.0);
  EXPECT_FALSE(r.support_ok);
  EXPECT_EQ(r.value, std::numeric_limits<double>::infinity());
}

TEST(Renyi, RejectsBadOrder) {
  const DensityMatrix rho = diagonal_state(0.5, 0.3, 0.2);
  EXPECT_THROW(petz_renyi(rho, rho, 1.0), InvalidArgument);
  EXPECT_THROW(petz_renyi(rho, rho, 0.0), InvalidArgument);
  EXPECT_THROW(petz_renyi(rho, rho, -1.0), InvalidArgument);
}

TEST(TrajectoryMetrics, FixedPointSeriesAreConstant) {
  const Generators g = build_generators(SystemParams{});
  DensityMatrix ground = DensityMatrix::Zero();
  ground(0, 0) = 1.0;
  CauchyCounter counter;
  const Trajectory tr = forward_solve(g, ControlGrid::constant(1.0, 10, 0.0, 0.0, 0.0), realify(ground), {}, counter);
  const auto series = trajectory_metrics(tr, Objective::overlap(diagonal_state(0.3, 0.7, 0.0)));
  ASSERT_EQ(series.size(), 8u);
  for (const MetricSeries& s : series) {
    ASSERT_EQ(s.values.size(), 11u) << s.name;
    for (double v : s.values) EXPECT_EQ(v, s.values.front()) << s.name;
  }
  EXPECT_EQ(series[0].name, "rho11");
  EXPECT_EQ(series[0].values.front(), 1.0);
}
