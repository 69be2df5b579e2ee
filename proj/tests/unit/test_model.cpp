#include "qutrit/dynamics.hpp"
#include "qutrit/model.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace qutrit;

namespace {

Vec9 vec(std::initializer_list<double> v) {
  Vec9 x;
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST(Realify, DiagonalState) {
  const Vec9 x = realify(diagonal_state(0.8, 0.0, 0.2));
  EXPECT_EQ(x, vec({0.8, 0, 0, 0, 0, 0, 0, 0, 0.2}));
}

TEST(Realify, MaximallyMixed) {
  const Vec9 x = realify(DensityMatrix::Identity() / 3.0);
  EXPECT_EQ(x, vec({1.0 / 3, 0, 0, 0, 0, 1.0 / 3, 0, 0, 1.0 / 3}));
}

TEST(Realify, ReadsCoherenceSlots) {
  DensityMatrix rho = diagonal_state(0.5, 0.3, 0.2);
  rho(0, 1) = {0.1, 0.2};
  rho(1, 0) = std::conj(rho(0, 1));
  const Vec9 x = realify(rho);
  EXPECT_DOUBLE_EQ(x[1], 0.1);
  EXPECT_DOUBLE_EQ(x[2], 0.2);
  for (int j : {3, 4, 6, 7}) EXPECT_EQ(x[j], 0.0);
}

TEST(Realify, RejectsNonHermitian) {
  DensityMatrix rho = diagonal_state(0.5, 0.3, 0.2);
  rho(0, 2) = {0.1, 0.0};
  EXPECT_THROW(realify(rho), InvalidState);
}

TEST(Derealify, Examples) {
  EXPECT_TRUE(derealify(vec({0.5, 0, 0, 0, 0, 0.3, 0, 0, 0.2})).isApprox(diagonal_state(0.5, 0.3, 0.2)));
  DensityMatrix ground = DensityMatrix::Zero();
  ground(0, 0) = 1.0;
  EXPECT_EQ(derealify(vec({1, 0, 0, 0, 0, 0, 0, 0, 0})), ground);
}

TEST(Derealify, RoundTripIsBitwise) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (int k = 0; k < 1000; ++k) {
    Vec9 x;
    for (int j = 0; j < 9; ++j) x[j] = d(rng);
    EXPECT_EQ(realify(derealify(x)), x);
  }
}

TEST(Derealify, IsHermitian) {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = test::random_density(rng);
  const DensityMatrix back = derealify(realify(rho));
  EXPECT_EQ(hermiticity_defect(back), 0.0);
  EXPECT_LT((back - rho).norm(), 1e-15);
}

TEST(DensityValidation, RejectsBadStates) {
  EXPECT_NO_THROW(validate_density_matrix(diagonal_state(0.3, 0.7, 0.0)));
  EXPECT_THROW(validate_density_matrix(diagonal_state(0.3, 0.6, 0.0)), InvalidState);
  EXPECT_THROW(validate_density_matrix(diagonal_state(1.2, 0.0, -0.2)), InvalidState);
}

TEST(BetaWeights, InnerProductIsTraceOfProduct) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix a = test::random_density(rng);
    const DensityMatrix b = test::random_density(rng);
    const double lhs = (beta_weights().array() * realify(a).array() * realify(b).array()).sum();
    EXPECT_NEAR(lhs, (a * b).trace().real(), 1e-14);
  }
}

TEST(OverlapBound, Examples) {
  EXPECT_NEAR(overlap_bound(diagonal_state(0.3, 0.7, 0.0)), 0.7, 1e-14);
  EXPECT_NEAR(overlap_bound(DensityMatrix::Identity() / 3.0), 1.0 / 3.0, 1e-14);
  std::mt19937_64 rng(4);
  Eigen::Vector3cd v = Eigen::Vector3cd::Random();
  v.normalize();
  EXPECT_NEAR(overlap_bound(v * v.adjoint()), 1.0, 1e-12);
}

TEST(Generators, TraceRowsSumToZero) {
  const Generators g = build_generators(SystemParams{});
  for (const Mat9* M : {&g.A, &g.Bu, &g.Bn1, &g.Bn2}) {
    const auto s = M->row(0) + M->row(5) + M->row(8);
    EXPECT_EQ(s.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Generators, NoDissipationLeavesHamiltonianPart) {
  SystemParams p;
  p.C13 = 0.0;
  p.C23 = 0.0;
  const Generators g = build_generators(p);
  EXPECT_TRUE(g.Bn1.isZero(0.0));
  EXPECT_TRUE(g.Bn2.isZero(0.0));
  // the commutator part of the drift is skew-symmetric and has a zero diagonal
  EXPECT_TRUE(g.A.diagonal().isZero(0.0));
  EXPECT_TRUE((g.A + g.A.transpose()).isZero(0.0));
}

// Independent oracle: the complex master equation, realified term by term.
TEST(Generators, MatchComplexMasterEquation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  SystemParams p{1.3, 2.1, 0.7, 1.9, 0.4, 0.6};
  const Generators g = build_generators(p);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix rho = test::random_density(rng);
    const double u = d(rng), n1 = std::abs(d(rng)), n2 = std::abs(d(rng));
    const Vec9 lhs = g.combined(u, n1, n2) * realify(rho);
    const DensityMatrix rhs = master_equation_rhs(p, u, n1, n2, rho);
    EXPECT_LT((derealify(lhs) - rhs).norm(), 1e-13) << "sample " << k;
  }
}

TEST(SystemParams, Validation) {
  SystemParams p;
  EXPECT_NO_THROW(p.validate());
  p.C13 = -0.1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = SystemParams{};
  p.E3 = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(ControlGrid, TimesAndCells) {
  const ControlGrid c = ControlGrid::constant(0.5, 1000, 1.0, 0.0, 0.0);
  EXPECT_EQ(c.cells(), 1000u);
  EXPECT_EQ(c.grid_time(0), 0.0);
  EXPECT_EQ(c.grid_time(1000), 0.5);
  EXPECT_EQ(c.cell_of(0.0), 0u);
  EXPECT_EQ(c.cell_of(0.5), 999u);
  EXPECT_EQ(c.cell_of(0.25 + 1e-9), 500u);
}

TEST(ControlGrid, Validation) {
  ControlGrid c = ControlGrid::constant(1.0, 4, 0.0, 0.0, 0.0);
  EXPECT_NO_THROW(c.validate());
  c.n1[2] = -0.1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ControlGrid::constant(1.0, 4, 0.0, 0.0, 0.0);
  c.n2.pop_back();
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ControlGrid::constant(1.0, 4, 0.0, 0.0, 0.0);
  c.T = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(ControlBounds, Clamping) {
  const ControlBounds box = ControlBounds::compact(50.0, 10.0);
  EXPECT_EQ(box.clamp_u(60.0), 50.0);
  EXPECT_EQ(box.clamp_u(-70.0), -50.0);
  EXPECT_EQ(box.clamp_n(-0.3), 0.0);
  EXPECT_EQ(box.clamp_n(12.0), 10.0);
  const ControlBounds half = ControlBounds::half_unbounded();
  EXPECT_EQ(half.clamp_u(1e6), 1e6);
  EXPECT_EQ(half.clamp_n(-0.3), 0.0);
  EXPECT_EQ(half.clamp_n(1e6), 1e6);
  EXPECT_TRUE(box.admits(50.0, 0.0, 10.0));
  EXPECT_FALSE(box.admits(50.1, 0.0, 10.0));
  EXPECT_THROW(ControlBounds::compact(-1.0, 1.0), InvalidArgument);
}

TEST(Objective, Construction) {
  const Objective j1 = Objective::overlap(diagonal_state(0.3, 0.7, 0.0));
  EXPECT_EQ(j1.kind, ObjectiveKind::Overlap);
  EXPECT_NEAR(j1.b, 0.7, 1e-14);
  const Objective j2 = Objective::squared_distance(diagonal_state(0.5, 0.3, 0.2));
  EXPECT_EQ(j2.kind, ObjectiveKind::SquaredDistance);
  EXPECT_EQ(j2.b, 0.0);
  EXPECT_EQ(to_string(ObjectiveKind::Overlap), "J1");
  EXPECT_EQ(to_string(ObjectiveKind::SquaredDistance), "J2");
}
