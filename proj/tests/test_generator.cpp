#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "imba/serialize.hpp"

using namespace imba;
using imba::testing::seeded;

TEST(Householder, OrthogonalSymmetricReflection) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    CounterRng rng(s, 0);
    const Mat Y = gen_householder(7, rng);
    EXPECT_LE((Y * Y.transpose() - Mat::Identity(7, 7)).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_EQ((Y - Y.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NEAR(Y.partialPivLu().determinant(), -1.0, 1e-10);
  }
}

TEST(ConstraintFactors, IdentityAtZeroExponent) {
  CounterRng rng(3, 0);
  const ConstraintFactors f = gen_constraint(5, 0.0, rng);
  EXPECT_LE((f.Q - Mat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ConstraintFactors, SpectrumAndFactorization) {
  CounterRng rng(4, 0);
  const int n = 9;
  const double ce = 3.0;
  const ConstraintFactors f = gen_constraint(n, ce, rng);
  std::vector<double> expected(n);
  for (int j = 0; j < n; ++j) expected[j] = std::pow(10.0, ce * j / (n - 1));
  std::vector<double> diag(f.diag.data(), f.diag.data() + n);
  std::sort(diag.begin(), diag.end());
  EXPECT_EQ(diag, expected);

  Eigen::SelfAdjointEigenSolver<Mat> es(f.Q);
  for (int j = 0; j < n; ++j)
    EXPECT_NEAR(es.eigenvalues()(j), expected[j], 1e-10 * expected[n - 1]);
  const Mat BtB = f.B.transpose() * f.B;
  EXPECT_LE((f.Q - BtB).norm() / f.Q.norm(), 1e-12);
}

TEST(Instance, StartPointSlack) {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    auto gi = seeded(20, 6, 4.0, s);
    const Vec g = eval_g(gi.problem, gi.x0);
    EXPECT_LE((g + gi.slacks).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(g.maxCoeff(), 0.0);
  }
}

TEST(Instance, HandSubstitution) {
  auto gi = seeded(2, 1, 0.0, 17, 0.0);
  const QuadConstraint& c = gi.problem.constraints[0];
  const double x0 = gi.x0(0), x1 = gi.x0(1);
  const double r0 = c.B(0, 0) * x0 + c.B(0, 1) * x1 + c.h(0);
  const double r1 = c.B(1, 0) * x0 + c.B(1, 1) * x1 + c.h(1);
  EXPECT_NEAR(r0 * r0 + r1 * r1 - c.d_sq, -gi.slacks(0), 1e-12);
  EXPECT_GE(gi.slacks(0), 0.0);
  EXPECT_LT(gi.slacks(0), 1.0);
}

TEST(Instance, DeterministicSerialization) {
  const auto a = seeded(12, 4, 4.0, 77);
  const auto b = seeded(12, 4, 4.0, 77);
  EXPECT_EQ(problem_to_json(a.problem).dump(), problem_to_json(b.problem).dump());
  EXPECT_EQ(a.x0, b.x0);
  const auto c = seeded(12, 4, 4.0, 78);
  EXPECT_NE(problem_to_json(a.problem).dump(), problem_to_json(c.problem).dump());
}

TEST(Instance, ConstraintStreamsIndependentOfM) {
  const auto a = seeded(8, 2, 2.0, 5);
  const auto b = seeded(8, 5, 2.0, 5);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(a.problem.constraints[i].B, b.problem.constraints[i].B);
    EXPECT_EQ(a.problem.constraints[i].d_sq, b.problem.constraints[i].d_sq);
  }
}

TEST(Instance, ConstraintMatricesWellFormed) {
  const double ce = 4.0;
  auto gi = seeded(30, 5, ce, 9);
  for (const auto& c : gi.problem.constraints) {
    const Mat Q = c.Q();
    EXPECT_LE((Q - Q.transpose()).cwiseAbs().maxCoeff(), 1e-12 * Q.norm());
    EXPECT_EQ(Eigen::LLT<Mat>(Q).info(), Eigen::Success);
    const double nrm = spectral_norm_estimate(Q, 200);
    EXPECT_LE(std::abs(nrm - std::pow(10.0, ce)), 1e-3 * std::pow(10.0, ce));
  }
}

TEST(Instance, QuadraticObjectiveShape) {
  auto gi = seeded(11, 1, 1.0, 2);
  const auto& q = std::get<QuadraticObjective>(gi.problem.objective);
  EXPECT_EQ(q.Y0.rows(), 5);
  EXPECT_EQ(q.Y0.cols(), 11);
  EXPECT_NEAR(q.b0_unit.norm(), 1.0, 1e-12);
  EXPECT_EQ(q.omega0, 10.0);
}

TEST(Instance, StudentTObjectiveShape) {
  GenConfig cfg;
  cfg.n = 6;
  cfg.m = 2;
  cfg.seed = 4;
  cfg.objective_kind = StudentTKind{15};
  auto gi = gen_feasible_instance(cfg);
  const auto& st = std::get<StudentTObjective>(gi.problem.objective);
  EXPECT_EQ(st.A.rows(), 15);
  EXPECT_EQ(st.b.size(), 15);
  EXPECT_LE(feasibility_violation(gi.problem, gi.x0), 0.0);
}

TEST(Instance, RejectsBadConfig) {
  GenConfig cfg;
  cfg.n = 1;
  cfg.m = 1;
  EXPECT_THROW(gen_feasible_instance(cfg), std::invalid_argument);
  cfg.n = 4;
  cfg.m = 0;
  EXPECT_THROW(gen_feasible_instance(cfg), std::invalid_argument);
}
