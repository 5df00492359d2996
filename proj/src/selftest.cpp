#include "imba/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imba/generator.hpp"

namespace imba {

double fd_gradient_error(const ScalarFn& f, const GradFn& grad, const Vec& x,
                         double h) {
  const Vec g = grad(x);
  Vec fd(x.size());
  Vec xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double orig = xp(j);
    xp(j) = orig + h;
    const double fp = f(xp);
    xp(j) = orig - h;
    const double fm = f(xp);
    xp(j) = orig;
    fd(j) = (fp - fm) / (2.0 * h);
  }
  if (g.size() != fd.size()) return std::numeric_limits<double>::infinity();
  const double denom = std::max(1.0, fd.cwiseAbs().maxCoeff());
  return (g - fd).cwiseAbs().maxCoeff() / denom;
}

SuiteResult fd_suite(const std::string& name, const ScalarFn& f,
                     const GradFn& grad, const std::function<Vec()>& sample,
                     int points, double tolerance, double h) {
  SuiteResult r;
  r.name = name;
  r.tolerance = tolerance;
  for (int k = 0; k < points; ++k) {
    const double err = fd_gradient_error(f, grad, sample(), h);
    r.worst = std::max(r.worst, std::isnan(err) ? 1e300 : err);
    ++r.cases;
  }
  r.passed = r.worst <= tolerance;
  return r;
}

Vec flatten(const DualPoint& w) {
  Vec v(w.lambda.size() + w.eta.size() + w.zeta.size());
  v << w.lambda, w.eta, w.zeta;
  return v;
}

DualPoint unflatten(const Vec& v, int m, int n, int p) {
  require(v.size() == m + n + p, "unflatten: size mismatch");
  return {v.segment(0, m), v.segment(m, n), v.segment(m + n, p)};
}

namespace {

constexpr double kFdTol = 1e-5;
constexpr double kIdentityTol = 1e-8;

GeneratedInstance fd_instance(const SelftestOptions& opt, bool studentt) {
  GenConfig cfg;
  cfg.n = 20;
  cfg.m = 5;
  cfg.seed = opt.seed;
  if (studentt) cfg.objective_kind = StudentTKind{40};
  return gen_feasible_instance(cfg);
}

Vec normal_vec(CounterRng& rng, int n) {
  Vec v(n);
  for (int j = 0; j < n; ++j) v(j) = rng.normal();
  return v;
}

Vec uniform_vec(CounterRng& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int j = 0; j < n; ++j) v(j) = rng.uniform(lo, hi);
  return v;
}

template <typename Body>
SuiteResult guarded(const std::string& name, double tol, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    SuiteResult r;
    r.name = name;
    r.tolerance = tol;
    r.detail = e.what();
    return r;
  }
}

}  // namespace

SuiteResult suite_grad_f0(const SelftestOptions& opt) {
  return guarded("grad_f0 finite differences", kFdTol, [&] {
    const GeneratedInstance inst = fd_instance(opt, false);
    const QdccProblem& prob = inst.problem;
    CounterRng rng(opt.seed, 101);
    return fd_suite(
        "grad_f0 finite differences",
        [&](const Vec& x) { return eval_f0(prob, x); },
        [&](const Vec& x) { return grad_f0(prob, x); },
        [&] { return normal_vec(rng, prob.n); }, opt.fd_points, kFdTol);
  });
}

SuiteResult suite_grad_f0_studentt(const SelftestOptions& opt) {
  return guarded("grad_f0 (Student-t) finite differences", kFdTol, [&] {
    const GeneratedInstance inst = fd_instance(opt, true);
    const QdccProblem& prob = inst.problem;
    CounterRng rng(opt.seed, 102);
    return fd_suite(
        "grad_f0 (Student-t) finite differences",
        [&](const Vec& x) { return eval_f0(prob, x); },
        [&](const Vec& x) { return grad_f0(prob, x); },
        [&] { return normal_vec(rng, prob.n); }, opt.fd_points, kFdTol);
  });
}

SuiteResult suite_jac_g(const SelftestOptions& opt) {
  return guarded("jac_g finite differences", kFdTol, [&] {
    const GeneratedInstance inst = fd_instance(opt, false);
    const QdccProblem& prob = inst.problem;
    CounterRng rng(opt.seed, 103);
    SuiteResult total;
    total.name = "jac_g finite differences";
    total.tolerance = kFdTol;
    for (int k = 0; k < opt.fd_points; ++k) {
      const Vec x = normal_vec(rng, prob.n);
      for (int i = 0; i < prob.m; ++i) {
        const double err = fd_gradient_error(
            [&](const Vec& y) { return eval_g(prob, y)(i); },
            [&](const Vec& y) { return Vec(jac_g(prob, y).col(i)); }, x);
        total.worst = std::max(total.worst, err);
      }
      ++total.cases;
    }
    total.passed = total.worst <= kFdTol;
    return total;
  });
}

SuiteResult suite_dual_grad(const SelftestOptions& opt) {
  return guarded("dual_grad finite differences", kFdTol, [&] {
    const GeneratedInstance inst = fd_instance(opt, false);
    const QdccProblem& prob = inst.problem;
    CounterRng rng(opt.seed, 104);
    const Vec L = uniform_vec(rng, prob.m, 1e2, 1e3);
    const ModelData model = build_model(prob, inst.x0, 1.0, L);
    const int m = model.m(), n = model.n(), p = model.p();
    const double c = prob.reg.c_phi;
    auto sample = [&] {
      DualPoint w;
      w.lambda = uniform_vec(rng, m, 0.1, 1.0);
      w.eta = uniform_vec(rng, n, -0.5 * c, 0.5 * c);
      w.zeta = normal_vec(rng, p);
      return flatten(w);
    };
    return fd_suite(
        "dual_grad finite differences",
        [&](const Vec& v) {
          return dual_theta(unflatten(v, m, n, p), model, prob);
        },
        [&](const Vec& v) {
          return flatten(dual_grad(unflatten(v, m, n, p), model, prob));
        },
        sample, opt.fd_points, kFdTol);
  });
}

SuiteResult suite_identity_T0(const SelftestOptions& opt) {
  return guarded("identity T0 = g0(x_k) + <xi, x - x_k>", kIdentityTol, [&] {
    SuiteResult r;
    r.name = "identity T0 = g0(x_k) + <xi, x - x_k>";
    r.tolerance = kIdentityTol;
    for (bool studentt : {false, true}) {
      const GeneratedInstance inst = fd_instance(opt, studentt);
      const QdccProblem& prob = inst.problem;
      CounterRng rng(opt.seed, studentt ? 106 : 105);
      for (int k = 0; k < opt.identity_pairs; ++k) {
        const Vec x = normal_vec(rng, prob.n);
        const Vec s = normal_vec(rng, prob.n);
        const Vec xi = subgrad_g0(prob, s);
        const PotentialPoint z{x, s, jac_g(prob, s), Vec::Ones(prob.m), xi};
        const ExtendedReal t0 = potential_T0(z, prob);
        ++r.cases;
        if (t0.infinite) {
          r.worst = std::numeric_limits<double>::infinity();
          r.detail = "T0 infinite at a selected subgradient";
          continue;
        }
        const double expected = eval_g0(prob, s) + xi.dot(x - s);
        const double scale = std::abs(eval_f0(prob, s)) +
                             std::abs(grad_f0(prob, s).dot(s)) +
                             std::abs(xi.dot(x)) + std::abs(eval_h0(prob, s));
        r.worst = std::max(r.worst, std::abs(t0.value - expected) / (1.0 + scale));
      }
    }
    r.passed = r.worst <= kIdentityTol;
    return r;
  });
}

SuiteResult suite_identity_T(const SelftestOptions& opt) {
  return guarded("identity T = G", kIdentityTol, [&] {
    SuiteResult r;
    r.name = "identity T = G";
    r.tolerance = kIdentityTol;
    const GeneratedInstance inst = fd_instance(opt, false);
    const QdccProblem& prob = inst.problem;
    CounterRng rng(opt.seed, 107);
    for (int k = 0; k < opt.identity_pairs; ++k) {
      const Vec x = normal_vec(rng, prob.n);
      const Vec s = normal_vec(rng, prob.n);
      const Vec L = uniform_vec(rng, prob.m, 0.5, 2.0);
      const Mat V = jac_g(prob, s);
      const PotentialPoint z{x, s, V, L, subgrad_g0(prob, s)};
      const ConstraintPotential t = potential_T(z, prob);

      ModelData model;
      model.x_k = s;
      model.g_xk = eval_g(prob, s);
      model.V_k = V;
      model.L = L;
      const Vec G = big_G(x, model);
      ++r.cases;
      if (t.any_infinite()) {
        r.worst = std::numeric_limits<double>::infinity();
        r.detail = "T infinite at the Jacobian";
        continue;
      }
      for (int i = 0; i < prob.m; ++i) {
        const QuadConstraint& c = prob.constraints[i];
        const double scale = std::abs(c.convex_part(s)) +
                             c.p_coef * s.squaredNorm() +
                             std::abs(V.col(i).dot(x)) +
                             std::abs(V.col(i).dot(s)) +
                             L(i) * (x - s).squaredNorm();
        r.worst =
            std::max(r.worst, std::abs(t.value(i) - G(i)) / (1.0 + scale));
      }
    }
    r.passed = r.worst <= kIdentityTol;
    return r;
  });
}

SuiteResult suite_prox(const SelftestOptions& opt) {
  return guarded("prox projection", 1e-12, [&] {
    SuiteResult r;
    r.name = "prox projection";
    r.tolerance = 1e-12;
    CounterRng rng(opt.seed, 108);
    bool ok = true;
    for (int k = 0; k < 50; ++k) {
      const int m = 4, n = 6, p = 3;
      const double c = rng.uniform(0.01, 1.0);
      DualPoint w{3.0 * normal_vec(rng, m), 3.0 * normal_vec(rng, n),
                  3.0 * normal_vec(rng, p)};
      const double tau = std::pow(10.0, rng.uniform(-6.0, 6.0));
      const DualPoint P = prox_map(w, tau, c);
      ok = ok && P.lambda.minCoeff() >= 0.0 &&
           P.eta.cwiseAbs().maxCoeff() <= c && P.zeta == w.zeta;
      const DualPoint PP = prox_map(P, tau, c);
      ok = ok && PP.squared_distance(P) == 0.0;
      // Projection: <w − P, u − P> ≤ 0 for every u in the domain.
      for (int t = 0; t < 10; ++t) {
        DualPoint u{uniform_vec(rng, m, 0.0, 5.0), uniform_vec(rng, n, -c, c),
                    normal_vec(rng, p)};
        const double ip = flatten(w).dot(flatten(u)) - flatten(w).dot(flatten(P)) -
                          flatten(P).dot(flatten(u)) + P.squared_norm();
        r.worst = std::max(r.worst, ip);
      }
      ++r.cases;
    }
    r.passed = ok && r.worst <= r.tolerance;
    if (!ok) r.detail = "projection left the domain or is not idempotent";
    return r;
  });
}

TinyModel make_tiny_model(std::uint64_t seed) {
  CounterRng rng(seed, 200);
  TinyModel t;
  QdccProblem& prob = t.prob;
  prob.n = 2;
  prob.m = 1;
  QuadraticObjective q;
  q.Y0 = uniform_vec(rng, 4, -1.0, 1.0).reshaped(2, 2);
  q.b0_unit = Vec::Unit(2, 0);
  q.omega0 = 1.0;
  prob.objective = q;
  prob.reg.c_h0 = 0.0;
  prob.reg.c_phi = rng.uniform(0.05, 0.3);
  QuadConstraint c;
  c.B = Mat::Identity(2, 2);
  c.h = Vec::Zero(2);
  c.d_sq = 1.0;
  prob.constraints.push_back(c);

  ModelData& md = t.model;
  md.x_k = uniform_vec(rng, 2, -0.5, 0.5);
  md.g0_xk = rng.uniform(-1.0, 1.0);
  md.phi_xk = eval_phi(prob, md.x_k);
  md.g_xk = Vec::Constant(1, -rng.uniform(0.1, 0.5));
  md.xi_k = uniform_vec(rng, 2, -1.0, 1.0);
  md.V_k = uniform_vec(rng, 2, -1.0, 1.0);
  md.mu = rng.uniform(0.5, 2.0);
  md.L = Vec::Constant(1, rng.uniform(1.0, 3.0));
  md.A_op = uniform_vec(rng, 4, -1.0, 1.0).reshaped(2, 2);
  md.a_kind = CurvatureOperator::FixedY0;
  return t;
}

double tiny_primal_oracle(const TinyModel& t, double grid_step) {
  // Plain scalar arithmetic, kept apart from the library's model code.
  const ModelData& md = t.model;
  const double xk0 = md.x_k(0), xk1 = md.x_k(1);
  const double a00 = md.A_op(0, 0), a01 = md.A_op(0, 1);
  const double a10 = md.A_op(1, 0), a11 = md.A_op(1, 1);
  const double v0 = md.V_k(0, 0), v1 = md.V_k(1, 0);
  const double L = md.L(0), g = md.g_xk(0), mu = md.mu;
  const double c = t.prob.reg.c_phi;
  auto Fk = [&](double x0, double x1) {
    const double d0 = x0 - xk0, d1 = x1 - xk1;
    const double e0 = a00 * d0 + a01 * d1, e1 = a10 * d0 + a11 * d1;
    return md.g0_xk + md.xi_k(0) * d0 + md.xi_k(1) * d1 +
           0.5 * mu * (d0 * d0 + d1 * d1) + 0.5 * (e0 * e0 + e1 * e1) +
           c * (std::abs(x0) + std::abs(x1));
  };
  auto Gk = [&](double x0, double x1) {
    const double d0 = x0 - xk0, d1 = x1 - xk1;
    return g + v0 * d0 + v1 * d1 + 0.5 * L * (d0 * d0 + d1 * d1);
  };
  const double c0 = xk0 - v0 / L, c1 = xk1 - v1 / L;
  const double R = std::sqrt((v0 * v0 + v1 * v1) / (L * L) - 2.0 * g / L);

  double best = std::numeric_limits<double>::infinity();
  double b0 = xk0, b1 = xk1;
  const int cells = static_cast<int>(std::ceil(2.0 * R / grid_step));
  for (int i = 0; i <= cells; ++i) {
    const double x0 = c0 - R + i * grid_step;
    for (int j = 0; j <= cells; ++j) {
      const double x1 = c1 - R + j * grid_step;
      if (Gk(x0, x1) > 0.0) continue;
      const double f = Fk(x0, x1);
      if (f < best) {
        best = f;
        b0 = x0;
        b1 = x1;
      }
    }
  }
  // Interior zoom.
  for (double w = 2.0 * grid_step; w > 1e-14; w /= 5.0) {
    const double s0 = b0, s1 = b1;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const double x0 = s0 + w * i / 10.0, x1 = s1 + w * j / 10.0;
        if (Gk(x0, x1) > 0.0) continue;
        const double f = Fk(x0, x1);
        if (f < best) {
          best = f;
          b0 = x0;
          b1 = x1;
        }
      }
    }
  }
  // Boundary circle.
  constexpr double kTwoPi = 6.283185307179586;
  auto on_circle = [&](double th) {
    return Fk(c0 + R * std::cos(th), c1 + R * std::sin(th));
  };
  double bt = 0.0, bf = std::numeric_limits<double>::infinity();
  const int na = 20000;
  for (int k = 0; k < na; ++k) {
    const double th = kTwoPi * k / na;
    const double f = on_circle(th);
    if (f < bf) {
      bf = f;
      bt = th;
    }
  }
  for (double w = 2.0 * kTwoPi / na; w > 1e-15; w /= 5.0) {
    const double s = bt;
    for (int k = -20; k <= 20; ++k) {
      const double th = s + w * k / 20.0;
      const double f = on_circle(th);
      if (f < bf) {
        bf = f;
        bt = th;
      }
    }
  }
  return std::min(best, bf);
}

SuiteResult suite_strong_duality(const SelftestOptions& opt) {
  return guarded("strong duality on tiny models", 1e-5, [&] {
    SuiteResult r;
    r.name = "strong duality on tiny models";
    r.tolerance = 1e-5;
    double worst_res = 0.0;
    for (int k = 0; k < opt.tiny_instances; ++k) {
      const TinyModel t = make_tiny_model(opt.seed + 17 * k);
      const double primal = tiny_primal_oracle(t);
      PglsParams params;
      params.l_max = 200000;
      const DualSolveResult dual = pgls_minimize(
          t.model, t.prob, DualPoint::zeros(1, 2, 2), params, 1e-11);
      const double dual_opt = dual_theta(dual.w, t.model, t.prob);
      r.worst = std::max(r.worst,
                         std::abs(primal + dual_opt) / (1.0 + std::abs(primal)));
      const PrimalRecovery rec = recover_primal(dual.w, t.model);
      worst_res = std::max(
          {worst_res, residual_S(rec.x, rec.v, dual.w.lambda, t.model),
           residual_C(rec.x, dual.w.lambda, t.model)});
      ++r.cases;
    }
    r.passed = r.worst <= r.tolerance && worst_res <= 1e-6;
    r.detail = "worst recovered S/C residual " + std::to_string(worst_res);
    return r;
  });
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt) {
  return {suite_grad_f0(opt),       suite_grad_f0_studentt(opt),
          suite_jac_g(opt),         suite_dual_grad(opt),
          suite_identity_T0(opt),   suite_identity_T(opt),
          suite_prox(opt),          suite_strong_duality(opt)};
}

}  // namespace imba
