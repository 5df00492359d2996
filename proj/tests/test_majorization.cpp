#include <gtest/gtest.h>

#include "helpers.hpp"
#include "imba/dual_solver.hpp"
#include "imba/majorization.hpp"

using namespace imba;
using imba::testing::seeded;

namespace {

struct Fixture {
  GeneratedInstance gi;
  ModelData md;
};

Fixture make(int n, int m, double cond, std::uint64_t seed, double mu = 1.0,
             double L = 10.0) {
  Fixture f{seeded(n, m, cond, seed), {}};
  f.md = build_model(f.gi.problem, f.gi.x0, mu, Vec::Constant(m, L));
  return f;
}

Vec random_vec(CounterRng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

// Model with G = (−1, 0.5) at x = x_k, for hand arithmetic.
ModelData hand_model() {
  ModelData md;
  md.x_k = Vec::Zero(2);
  md.g_xk = Vec(2);
  md.g_xk << -1.0, 0.5;
  md.xi_k = Vec::Zero(2);
  md.V_k = Mat::Identity(2, 2);
  md.L = Vec::Zero(2);
  md.A_op = Mat::Zero(0, 2);
  return md;
}

}  // namespace

TEST(Model, BuildsConsistentData) {
  auto f = make(10, 3, 2.0, 4);
  EXPECT_NEAR(f.md.g0_xk, eval_g0(f.gi.problem, f.gi.x0),
              1e-12 * std::abs(f.md.g0_xk));
  EXPECT_LE(f.md.g_xk.maxCoeff(), 0.0);
  EXPECT_EQ(f.md.V_k, jac_g(f.gi.problem, f.gi.x0));
  EXPECT_EQ(f.md.a_kind, CurvatureOperator::FixedY0);
  EXPECT_EQ(f.md.p(), 5);
}

TEST(BigG, AtCenterAndHandCase) {
  auto f = make(6, 2, 1.0, 2);
  EXPECT_EQ(big_G(f.md.x_k, f.md), f.md.g_xk);

  ModelData md;
  md.x_k = Vec::Zero(2);
  md.g_xk = Vec::Constant(1, -1.0);
  md.V_k = Mat(2, 1);
  md.V_k << 2.0, 0.0;
  md.L = Vec::Constant(1, 4.0);
  EXPECT_DOUBLE_EQ(big_G(Vec::Unit(2, 0), md)(0), 3.0);
}

TEST(BigG, AffineWithoutCurvature) {
  auto f = make(6, 2, 1.0, 2, 1.0, 0.0);
  CounterRng rng(1, 1);
  const Vec x = random_vec(rng, 6);
  const Vec lhs = big_G(x, f.md) + big_G(2.0 * f.md.x_k - x, f.md);
  EXPECT_LE((lhs - 2.0 * f.md.g_xk).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ModelObjective, EqualsFAtCenter) {
  auto f = make(8, 2, 2.0, 3);
  EXPECT_NEAR(model_objective(f.md.x_k, f.md, f.gi.problem),
              eval_F(f.gi.problem, f.gi.x0), 1e-12);
}

TEST(ModelObjective, PureQuadraticWithoutAOrPhi) {
  auto f = make(4, 1, 1.0, 3, 3.0);
  f.md.A_op = Mat::Zero(0, 4);
  f.gi.problem.reg.c_phi = 0.0;
  f.md.phi_xk = 0.0;
  CounterRng rng(2, 2);
  const Vec d = random_vec(rng, 4);
  const double expect = f.md.g0_xk + f.md.xi_k.dot(d) + 1.5 * d.squaredNorm();
  EXPECT_NEAR(model_objective(f.md.x_k + d, f.md, f.gi.problem), expect, 1e-10);
}

TEST(ModelObjective, ConvexityLowerBound) {
  auto f = make(8, 2, 2.0, 5);
  const Vec v = f.gi.problem.reg.c_phi * f.md.x_k.cwiseSign();
  const double Fk = eval_F(f.gi.problem, f.gi.x0);
  CounterRng rng(5, 5);
  for (int t = 0; t < 50; ++t) {
    const Vec d = random_vec(rng, 8);
    EXPECT_GE(model_objective(f.md.x_k + d, f.md, f.gi.problem),
              Fk + (f.md.xi_k + v).dot(d) - 1e-9 * (1.0 + std::abs(Fk)));
  }
}

TEST(Residuals, StationarityTrivialZero) {
  auto f = make(6, 2, 1.0, 6);
  EXPECT_EQ(residual_S(f.md.x_k, -f.md.xi_k, Vec::Zero(2), f.md), 0.0);
  EXPECT_THROW(residual_S(f.md.x_k, -f.md.xi_k, Vec::Constant(2, -1.0), f.md),
               std::invalid_argument);
}

TEST(Residuals, StationarityHandCase) {
  ModelData md = hand_model();
  md.xi_k << 1.0, 0.0;
  md.mu = 2.0;
  Vec x(2), v(2), lam(2);
  x << 1.0, 0.0;
  v << 0.0, 0.5;
  lam << 0.0, 1.0;
  // ξ + μΔ + v + Vλ = (1 + 2, 0.5 + 1)
  EXPECT_NEAR(residual_S(x, v, lam, md), std::hypot(3.0, 1.5), 1e-15);
  // Shifting v by a vector cancelled by λ leaves S unchanged.
  Vec v2 = v, lam2 = lam;
  v2(1) += 1.0;
  lam2(1) -= 1.0;
  EXPECT_EQ(residual_S(x, v2, lam2, md), residual_S(x, v, lam, md));
}

TEST(Residuals, ComplementarityHandCase) {
  const ModelData md = hand_model();
  Vec lam(2);
  lam << 2.0, 0.0;
  EXPECT_DOUBLE_EQ(residual_C(md.x_k, lam, md), 2.5);
  EXPECT_THROW(residual_C(md.x_k, -lam, md), std::invalid_argument);
}

TEST(Residuals, ComplementarityZeroCases) {
  auto f = make(6, 2, 1.0, 6);
  EXPECT_EQ(residual_C(f.md.x_k, Vec::Zero(2), f.md), 0.0);
}

TEST(Residuals, ZeroAtHighAccuracyDualSolution) {
  auto f = make(6, 2, 1.0, 8);
  PglsParams p;
  p.l_max = 200000;
  const auto r = pgls_minimize(f.md, f.gi.problem,
                               DualPoint::zeros(2, 6, f.md.p()), p, 1e-11);
  const double scale = 1.0 + f.md.xi_k.norm();
  EXPECT_LE(residual_S(r.x_candidate, r.v_candidate, r.lambda_candidate, f.md),
            1e-8 * scale);
  EXPECT_LE(residual_C(r.x_candidate, r.lambda_candidate, f.md), 1e-7 * scale);
  EXPECT_TRUE(check_inexact(r.x_candidate, r.v_candidate, r.lambda_candidate,
                            f.md, f.gi.problem, InexactParams{}));
}

TEST(Inexact, AcceptsCenterAtStationaryPoint) {
  const QdccProblem p = imba::testing::unit_ball_problem(0.0, 0.1);
  const ModelData md = build_model(p, Vec::Zero(2), 1.0, Vec::Ones(1));
  EXPECT_TRUE(check_inexact(md.x_k, -md.xi_k, Vec::Zero(1), md, p, {}));
}

TEST(Inexact, RejectsLargeViolation) {
  auto f = make(6, 2, 1.0, 6);
  const Vec y = f.md.x_k + 1e-3 * Vec::Ones(6);
  // Push G far above zero by faking a positive constraint value.
  f.md.g_xk(0) = 1.0;
  const InexactParams ip{1.0, 1e6};
  const auto t = inexact_terms(y, Vec::Zero(6), Vec::Zero(2), f.md,
                               f.gi.problem, ip);
  EXPECT_GT(t.C, t.C_bound);
  EXPECT_FALSE(check_inexact(y, Vec::Zero(6), Vec::Zero(2), f.md,
                             f.gi.problem, ip));
}

TEST(Accept, CenterIsAccepted) {
  auto f = make(6, 2, 1.0, 7);
  EXPECT_TRUE(accept_step(f.md.x_k, f.md, f.gi.problem, 1e-6).accepted);
}

TEST(Accept, InfeasibleAndInsufficientFlags) {
  // p_coef below the spectrum of Q, so far-away points are infeasible.
  Fixture f{seeded(6, 2, 1.0, 7, 0.5), {}};
  f.md = build_model(f.gi.problem, f.gi.x0, 1.0, Vec::Constant(2, 10.0));
  const auto bad = accept_step(Vec::Constant(6, 1e3), f.md, f.gi.problem, 1e-6);
  EXPECT_FALSE(bad.accepted);
  EXPECT_TRUE(bad.infeasible);
  // A tiny feasible move uphill along ξ.
  const Vec y = f.md.x_k + 1e-8 * f.md.xi_k.normalized();
  ASSERT_LE(eval_g(f.gi.problem, y).maxCoeff(), 0.0);
  const auto up = accept_step(y, f.md, f.gi.problem, 1e-6);
  EXPECT_FALSE(up.accepted);
  EXPECT_FALSE(up.infeasible);
  EXPECT_TRUE(up.insufficient_decrease);
}

TEST(Potential, IdentitiesAtRandomPoints) {
  auto f = make(10, 3, 3.0, 9);
  CounterRng rng(9, 9);
  for (int t = 0; t < 30; ++t) {
    const Vec x = f.md.x_k + random_vec(rng, 10, 0.1);
    const PotentialPoint z{x, f.md.x_k, f.md.V_k, f.md.L, f.md.xi_k};
    const ExtendedReal t0 = potential_T0(z, f.gi.problem);
    ASSERT_TRUE(t0.is_finite());
    const double ref = f.md.g0_xk + f.md.xi_k.dot(x - f.md.x_k);
    EXPECT_LE(std::abs(t0.value - ref), 1e-8 * (1.0 + std::abs(f.md.g0_xk)));
    const ConstraintPotential tv = potential_T(z, f.gi.problem);
    ASSERT_FALSE(tv.any_infinite());
    EXPECT_LE((tv.value - big_G(x, f.md)).cwiseAbs().maxCoeff(),
              1e-8 * (1.0 + f.md.g_xk.cwiseAbs().maxCoeff()));
  }
}

TEST(Potential, AtCenterEqualsF) {
  auto f = make(10, 3, 3.0, 10);
  const PotentialPoint z{f.md.x_k, f.md.x_k, f.md.V_k, f.md.L, f.md.xi_k};
  const ExtendedReal phi = potential_Phi(z, f.gi.problem);
  ASSERT_TRUE(phi.is_finite());
  const double F = eval_F(f.gi.problem, f.gi.x0);
  EXPECT_NEAR(phi.value, F, 1e-9 * (1.0 + std::abs(F)));
}

TEST(Potential, InfiniteWhenXiLeavesBall) {
  auto f = make(10, 3, 3.0, 10);
  Vec xi = f.md.xi_k;
  xi(0) += 1.0;
  const PotentialPoint z{f.md.x_k, f.md.x_k, f.md.V_k, f.md.L, xi};
  EXPECT_TRUE(potential_T0(z, f.gi.problem).infinite);
  EXPECT_TRUE(potential_Phi(z, f.gi.problem).infinite);
}
