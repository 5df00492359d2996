#include <gtest/gtest.h>

#include "helpers.hpp"
#include "imba/dual_solver.hpp"
#include "imba/selftest.hpp"

using namespace imba;
using imba::testing::central_difference;
using imba::testing::rel_err;
using imba::testing::seeded;

namespace {

struct Fixture {
  GeneratedInstance gi;
  ModelData md;
};

Fixture make(int n, int m, std::uint64_t seed, double cond = 2.0) {
  Fixture f{seeded(n, m, cond, seed), {}};
  f.md = build_model(f.gi.problem, f.gi.x0, 1.0, Vec::Constant(m, 50.0));
  return f;
}

DualPoint random_dual(CounterRng& rng, const ModelData& md, double c_phi) {
  DualPoint w = DualPoint::zeros(md.m(), md.n(), md.p());
  for (int i = 0; i < md.m(); ++i) w.lambda(i) = rng.uniform(0.0, 1.0);
  for (int j = 0; j < md.n(); ++j) w.eta(j) = rng.uniform(-c_phi, c_phi);
  for (int j = 0; j < md.p(); ++j) w.zeta(j) = rng.normal();
  return w;
}

Vec projected_gradient(const DualPoint& w, const ModelData& md,
                       const QdccProblem& prob) {
  const DualPoint g = dual_grad(w, md, prob);
  const DualPoint step{w.lambda - g.lambda, w.eta - g.eta, w.zeta - g.zeta};
  return flatten(w) - flatten(prox_map(step, 1.0, prob.reg.c_phi));
}

}  // namespace

TEST(Theta, AtZero) {
  auto f = make(8, 3, 1);
  const double expect =
      f.md.xi_k.squaredNorm() / (2.0 * f.md.mu) - f.md.g0_xk;
  EXPECT_NEAR(dual_theta(DualPoint::zeros(3, 8, f.md.p()), f.md, f.gi.problem),
              expect, 1e-12 * (1.0 + std::abs(expect)));
}

TEST(Theta, RejectsPointsOutsideDomain) {
  auto f = make(8, 3, 1);
  DualPoint w = DualPoint::zeros(3, 8, f.md.p());
  w.lambda(0) = -1.0;
  EXPECT_THROW(dual_theta(w, f.md, f.gi.problem), std::invalid_argument);
  w.lambda(0) = 0.0;
  w.eta(0) = 1.0;
  EXPECT_THROW(dual_Xi(w, f.md, f.gi.problem), std::invalid_argument);
}

TEST(Theta, MidpointConvexity) {
  auto f = make(8, 3, 2);
  CounterRng rng(2, 2);
  const double c = f.gi.problem.reg.c_phi;
  for (int t = 0; t < 50; ++t) {
    const DualPoint a = random_dual(rng, f.md, c), b = random_dual(rng, f.md, c);
    const DualPoint mid{0.5 * (a.lambda + b.lambda), 0.5 * (a.eta + b.eta),
                        0.5 * (a.zeta + b.zeta)};
    const double ta = dual_theta(a, f.md, f.gi.problem);
    const double tb = dual_theta(b, f.md, f.gi.problem);
    const double tm = dual_theta(mid, f.md, f.gi.problem);
    EXPECT_LE(tm, 0.5 * (ta + tb) + 1e-10 * (1.0 + std::abs(ta) + std::abs(tb)));
  }
}

TEST(Gradient, MatchesFiniteDifferences) {
  auto f = make(20, 5, 3);
  CounterRng rng(3, 3);
  const int m = 5, n = 20, p = f.md.p();
  for (int t = 0; t < 20; ++t) {
    const DualPoint w = random_dual(rng, f.md, 0.5 * f.gi.problem.reg.c_phi);
    const auto theta = [&](const Vec& v) {
      return dual_theta(unflatten(v, m, n, p), f.md, f.gi.problem);
    };
    const Vec g = flatten(dual_grad(w, f.md, f.gi.problem));
    EXPECT_LE(rel_err(g, central_difference(theta, flatten(w))), 1e-5);
  }
}

TEST(Gradient, HandCaseWithoutCurvature) {
  // n = m = 1, L = 0, A absent: r = vλ + η + ξ, gλ = v·r/μ − g.
  QdccProblem prob = imba::testing::unit_ball_problem(0.0, 1.0);
  ModelData md;
  md.x_k = Vec::Constant(1, 0.5);
  md.g_xk = Vec::Constant(1, -0.2);
  md.xi_k = Vec::Constant(1, 0.3);
  md.V_k = Mat::Constant(1, 1, 2.0);
  md.mu = 4.0;
  md.L = Vec::Zero(1);
  md.A_op = Mat::Zero(0, 1);
  prob.n = 1;
  prob.constraints[0].B = Mat::Identity(1, 1);
  prob.constraints[0].h = Vec::Zero(1);
  DualPoint w{Vec::Constant(1, 0.25), Vec::Constant(1, 0.1), Vec::Zero(0)};
  const double r = 2.0 * 0.25 + 0.1 + 0.3;
  const DualPoint g = dual_grad(w, md, prob);
  EXPECT_NEAR(g.lambda(0), 2.0 * r / 4.0 + 0.2, 1e-15);
  EXPECT_NEAR(g.eta(0), r / 4.0 - 0.5, 1e-15);
}

TEST(Prox, Projections) {
  DualPoint w{Vec(2), Vec(2), Vec::Constant(1, -3.0)};
  w.lambda << -1.0, 2.0;
  w.eta << 0.05, -0.004;
  const DualPoint p = prox_map(w, 7.0, 0.01);
  EXPECT_EQ(p.lambda(0), 0.0);
  EXPECT_EQ(p.lambda(1), 2.0);
  EXPECT_EQ(p.eta(0), 0.01);
  EXPECT_EQ(p.eta(1), -0.004);
  EXPECT_EQ(p.zeta(0), -3.0);
  const DualPoint q = prox_map(p, 1.0, 0.01);
  EXPECT_EQ(flatten(q), flatten(p));
}

TEST(Recover, ZeroDualAndZeroResidual) {
  auto f = make(6, 2, 4);
  const auto r0 = recover_primal(DualPoint::zeros(2, 6, f.md.p()), f.md);
  EXPECT_LE((r0.x - (f.md.x_k - f.md.xi_k / f.md.mu)).norm(), 1e-14);
  // r = 0 when η cancels ξ and λ = ζ = 0.
  DualPoint w = DualPoint::zeros(2, 6, f.md.p());
  w.eta = -f.md.xi_k;
  const auto r1 = recover_primal(w, f.md);
  EXPECT_LE((r1.x - f.md.x_k).norm(), 1e-15);
  EXPECT_EQ(r1.v, w.eta);
}

TEST(MinimizeZeta, ZeroesZetaGradient) {
  auto f = make(8, 3, 5);
  CounterRng rng(5, 5);
  const DualPoint w = random_dual(rng, f.md, f.gi.problem.reg.c_phi);
  const DualPoint z = minimize_zeta(w, f.md);
  EXPECT_LE(dual_theta(z, f.md, f.gi.problem),
            dual_theta(w, f.md, f.gi.problem));
  EXPECT_LE(dual_grad(z, f.md, f.gi.problem).zeta.norm(), 1e-10);
  EXPECT_EQ(z.lambda, w.lambda);
}

TEST(Pgls, DomainAndSufficientDecrease) {
  auto f = make(20, 5, 6, 4.0);
  const double c = f.gi.problem.reg.c_phi;
  PglsParams p;
  int steps = 0;
  const auto obs = [&](const PglsStepInfo& s) {
    ++steps;
    EXPECT_GE(s.w_next->lambda.minCoeff(), 0.0);
    EXPECT_LE(s.w_next->eta.cwiseAbs().maxCoeff(), c);
    EXPECT_LE(s.decrease, -0.5 * p.delta * s.tau * s.step_sq);
    EXPECT_LE(s.backtracks, p.max_backtracks);
  };
  const auto r = pgls_solve(f.md, f.gi.problem,
                            DualPoint::zeros(5, 20, f.md.p()), p, {}, obs);
  EXPECT_EQ(r.status, DualStatus::InexactAccepted);
  EXPECT_EQ(steps, r.inner_pg_iters);
  EXPECT_TRUE(check_inexact(r.x_candidate, r.v_candidate, r.lambda_candidate,
                            f.md, f.gi.problem, {}));
}

TEST(Pgls, Deterministic) {
  auto f = make(20, 5, 7, 4.0);
  const DualPoint w0 = DualPoint::zeros(5, 20, f.md.p());
  const auto a = pgls_solve(f.md, f.gi.problem, w0, {}, {});
  const auto b = pgls_solve(f.md, f.gi.problem, w0, {}, {});
  EXPECT_EQ(a.inner_pg_iters, b.inner_pg_iters);
  EXPECT_EQ(a.x_candidate, b.x_candidate);
  EXPECT_EQ(flatten(a.w), flatten(b.w));
}

TEST(Pgls, WarmStartAtOptimum) {
  auto f = make(10, 3, 8);
  PglsParams p;
  p.l_max = 200000;
  const auto opt = pgls_minimize(f.md, f.gi.problem,
                                 DualPoint::zeros(3, 10, f.md.p()), p, 1e-11);
  ASSERT_EQ(opt.status, DualStatus::InexactAccepted);
  EXPECT_LE(projected_gradient(opt.w, f.md, f.gi.problem).norm(), 1e-7);
  const auto r = pgls_solve(f.md, f.gi.problem, opt.w, {}, {});
  EXPECT_EQ(r.status, DualStatus::InexactAccepted);
  EXPECT_LE(r.inner_pg_iters, 2);
}

TEST(Pgls, StrongDualityOnTinyModels) {
  const SuiteResult r = suite_strong_duality({});
  EXPECT_TRUE(r.passed) << r.detail;
}
