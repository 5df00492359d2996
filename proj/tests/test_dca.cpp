#include <gtest/gtest.h>

#include "helpers.hpp"
#include "imba/dca.hpp"

using namespace imba;
using imba::testing::seeded;

namespace {

Vec random_vec(CounterRng& rng, int n, double scale) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

double kkt_best(const QdccProblem& p, const SolveReport& r) {
  const Vec v = best_phi_subgradient(p, r.x_final, r.lambda_final, 1e-9);
  const KktResidual k = kkt_residual(p, r.x_final, v, r.lambda_final);
  return std::max({k.stationarity, k.complementarity, k.feasibility});
}

}  // namespace

TEST(DcaSubproblem, MajorizesAndMatchesAtCenter) {
  auto gi = seeded(8, 3, 2.0, 3);
  const QdccProblem sub = dca_subproblem(gi.problem, gi.x0);
  EXPECT_NEAR(eval_F(sub, gi.x0), eval_F(gi.problem, gi.x0), 1e-9);
  EXPECT_EQ(feasibility_violation(sub, gi.x0), 0.0);
  CounterRng rng(3, 3);
  for (int t = 0; t < 30; ++t) {
    const Vec x = gi.x0 + random_vec(rng, 8, 0.5);
    EXPECT_GE(eval_F(sub, x), eval_F(gi.problem, x) - 1e-9);
    const Vec gs = eval_g(sub, x), g = eval_g(gi.problem, x);
    for (int i = 0; i < 3; ++i)
      EXPECT_GE(gs(i), g(i) - 1e-9 * (1.0 + std::abs(g(i))));
  }
  for (const auto& c : sub.constraints) EXPECT_EQ(c.p_coef, 0.0);
}

TEST(DcaSubproblem, LinearizedNormHasRegularizerLength) {
  auto gi = seeded(5, 1, 1.0, 4);
  const QdccProblem sub = dca_subproblem(gi.problem, gi.x0);
  EXPECT_NEAR(sub.lin_shift.norm(), 0.01, 1e-15);
  EXPECT_LE((sub.lin_shift + 0.01 * gi.x0.normalized()).norm(), 1e-15);
  EXPECT_EQ(dca_subproblem(gi.problem, Vec::Zero(5)).lin_shift.norm(), 0.0);
}

TEST(DcaSubproblem, OneDimensionalHandCase) {
  // g(x) = (2x + 1)² − 3x² − 4 at x_k = 0.5: linearized g̃(x) = (2x+1)² − 3x + 0.75 − 4.
  QdccProblem p;
  p.n = 1;
  p.m = 1;
  QuadraticObjective q;
  q.Y0 = Mat::Zero(0, 1);
  q.b0_unit = Vec::Ones(1);
  q.omega0 = 0.0;
  p.objective = q;
  QuadConstraint c;
  c.B = Mat::Constant(1, 1, 2.0);
  c.h = Vec::Ones(1);
  c.d_sq = 4.0;
  c.p_coef = 3.0;
  p.constraints.push_back(c);
  const QdccProblem sub = dca_subproblem(p, Vec::Constant(1, 0.5));
  for (double x : {-1.0, 0.0, 0.5, 0.7}) {
    const double expect = (2 * x + 1) * (2 * x + 1) - 3.0 * x + 0.75 - 4.0;
    EXPECT_NEAR(eval_g(sub, Vec::Constant(1, x))(0), expect, 1e-14);
  }
  const CompletedSquare cs = completed_square(sub.constraints[0]);
  // (2x + 1)² − 3x = (2x + 0.25)² + 0.9375
  EXPECT_NEAR(cs.h_tilde(0), 0.25, 1e-15);
  for (double x : {-1.0, 0.3}) {
    const double sq = (2 * x + cs.h_tilde(0)) * (2 * x + cs.h_tilde(0));
    EXPECT_NEAR(sq - cs.d_sq_tilde, eval_g(sub, Vec::Constant(1, x))(0), 1e-13);
  }
}

TEST(Dca, ConvexProblemIsAFixedPoint) {
  auto gi = seeded(6, 2, 1.0, 5, 0.0);
  gi.problem.reg.c_h0 = 0.0;
  DcaParams params;
  params.k_max = 3;
  const SolveReport r = dca_solve(gi.problem, gi.x0, params);
  ASSERT_GE(r.iterations(), 2);
  EXPECT_LE(r.records[1].step_norm, 1e-6);
}

TEST(Dca, FeasibleDescentOnSeededInstances) {
  DcaParams params;
  params.k_max = 50;
  for (std::uint64_t seed : {1u, 2u}) {
    auto gi = seeded(10, 3, 2.0, seed, 0.5);
    const SolveReport r = dca_solve(gi.problem, gi.x0, params);
    ASSERT_NE(r.status, SolveStatus::SubproblemFailure) << r.message;
    double F_prev = r.F_initial;
    for (const auto& rec : r.records) {
      EXPECT_EQ(rec.feas, 0.0);
      EXPECT_LE(rec.F, F_prev + 1e-8 * (1.0 + std::abs(F_prev)));
      F_prev = rec.F;
    }
  }
}

TEST(Dca, TinyInstancesReachKktPoints) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto gi = seeded(2, 1, 1.0, seed, 0.5);
    const SolveReport r = dca_solve(gi.problem, gi.x0, {});
    ASSERT_EQ(r.status, SolveStatus::StepTol) << r.message;
    EXPECT_LE(kkt_best(gi.problem, r), 1e-3);
  }
}
