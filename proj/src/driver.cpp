#include "imba/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "imba/rng.hpp"

namespace imba {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::StepTol:
      return "StepTol";
    case SolveStatus::ComplTol:
      return "ComplTol";
    case SolveStatus::IterLimit:
      return "IterLimit";
    case SolveStatus::SubproblemFailure:
      return "SubproblemFailure";
  }
  return "Unknown";
}

void SolverParams::validate() const {
  require(mu_min > 0.0 && mu_min <= mu_max, "params: need 0 < mu_min <= mu_max");
  require(L_min > 0.0 && L_min <= L_max, "params: need 0 < L_min <= L_max");
  require(beta_C > 0.0 && beta_S > 0.0, "params: beta_C, beta_S must be > 0");
  require(alpha > 0.0, "params: alpha must be > 0");
  require(tau > 1.0, "params: tau must be > 1");
  require(eps_step > 0.0 && eps_compl > 0.0, "params: tolerances must be > 0");
  require(k_max >= 1, "params: k_max must be >= 1");
  require(pgls.delta > 0.0 && pgls.delta < 1.0, "params: delta in (0,1)");
  require(pgls.rho > 1.0, "params: rho must be > 1");
  require(pgls.tau_min > 0.0 && pgls.tau_min <= pgls.tau_max,
          "params: need 0 < tau_min <= tau_max");
  require(pgls.l_max >= 1, "params: l_max must be >= 1");
}

CurvatureInit estimate_curvature_init(const QdccProblem& prob, const Vec& x0,
                                      const SolverParams& params) {
  constexpr int kDirections = 5;
  constexpr double kStep = 1e-4;
  CounterRng rng(prob.meta.seed, streams::kCurvatureProbe);

  std::vector<Vec> dirs;
  dirs.reserve(kDirections);
  for (int k = 0; k < kDirections; ++k) {
    Vec d(prob.n);
    do {
      for (int j = 0; j < prob.n; ++j) d(j) = rng.normal();
    } while (d.norm() == 0.0);
    dirs.push_back(d / d.norm());
  }

  CurvatureInit init;
  const Vec g0 = grad_f0(prob, x0);
  double mu = 0.0;
  for (const Vec& d : dirs) {
    mu = std::max(mu, (grad_f0(prob, x0 + kStep * d) - g0).norm() / kStep);
  }
  init.mu00 = std::clamp(mu, params.mu_min, params.mu_max);

  init.L00.resize(prob.m);
  for (int i = 0; i < prob.m; ++i) {
    const QuadConstraint& c = prob.constraints[i];
    const Vec gi = c.convex_part_gradient(x0);
    double lip = 0.0;
    for (const Vec& d : dirs) {
      lip = std::max(
          lip, (c.convex_part_gradient(x0 + kStep * d) - gi).norm() / kStep);
    }
    init.L00(i) = std::clamp(0.05 * lip, params.L_min, params.L_max);
  }
  return init;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SolveReport solve(const QdccProblem& prob, const Vec& x0,
                  const SolverParams& params, const IterationObserver& observer,
                  const PglsObserver& pgls_observer) {
  params.validate();
  prob.validate();
  require(x0.size() == prob.n, "solve: x0 has wrong dimension");
  require(feasibility_violation(prob, x0) == 0.0, "solve: x0 is infeasible");

  const auto t_start = Clock::now();
  SolveReport report;
  report.F_initial = eval_F(prob, x0);

  const CurvatureInit init = estimate_curvature_init(prob, x0, params);
  double mu = init.mu00;
  Vec L = init.L00;

  Vec x = x0;
  Vec lambda = Vec::Zero(prob.m);
  Vec v = Vec::Zero(prob.n);
  DualPoint w_warm;
  bool have_warm = false;
  const InexactParams inexact = params.inexact();

  report.status = SolveStatus::IterLimit;
  for (int k = 0; k < params.k_max; ++k) {
    ModelData model = build_model(prob, x, mu, L);
    if (!have_warm || w_warm.zeta.size() != model.p()) {
      w_warm = DualPoint::zeros(prob.m, prob.n, model.p());
      if (have_warm) w_warm.lambda = lambda;
    }

    IterateRecord rec;
    rec.k = k;
    bool committed = false;
    bool failed_last = false;
    DualSolveResult sub;
    AcceptVerdict verdict;
    for (int j = 0;; ++j) {
      model.mu = mu;
      model.L = L;
      ++rec.inner_steps;
      bool sub_ok = true;
      try {
        sub = pgls_solve(model, prob, w_warm, params.pgls, inexact,
                         pgls_observer);
        sub_ok = sub.status == DualStatus::InexactAccepted;
      } catch (const NumericalFailure& e) {
        sub_ok = false;
        report.message = e.what();
      }
      rec.pg_iters += sub.inner_pg_iters;

      if (!sub_ok) {
        if (failed_last) {
          report.status = SolveStatus::SubproblemFailure;
          if (report.message.empty())
            report.message = "subproblem solver failed on consecutive trials";
          break;
        }
        failed_last = true;
        mu *= params.tau;
      } else {
        failed_last = false;
        verdict = accept_step(sub.x_candidate, model, prob, params.alpha);
        if (verdict.accepted) {
          committed = true;
          break;
        }
        if (verdict.near_boundary) ++rec.near_boundary;
        if (verdict.infeasible) {
          L *= params.tau;
        } else {
          mu *= params.tau;
        }
      }
      if (mu > params.mu_max * params.tau ||
          (L.size() > 0 && L.maxCoeff() > params.L_max * params.tau)) {
        report.status = SolveStatus::SubproblemFailure;
        report.message = "curvature exceeded its cap";
        break;
      }
    }
    if (!committed) break;

    const Vec x_next = sub.x_candidate;
    rec.step_norm = (x_next - x).norm();
    rec.F = verdict.F_y;
    rec.mu_k = mu;
    rec.L_k_max = L.size() > 0 ? L.maxCoeff() : 0.0;
    if (params.compute_potential) {
      const PotentialPoint z{x_next, x, model.V_k, L, model.xi_k};
      rec.phi_potential = potential_Phi(z, prob);
    } else {
      rec.phi_potential = ExtendedReal::plus_infinity();
    }

    x = x_next;
    lambda = sub.lambda_candidate;
    v = sub.v_candidate;
    w_warm = sub.w;
    have_warm = true;

    const Vec g = eval_g(prob, x);
    rec.compl_ = positive_part(-lambda.dot(g));
    rec.feas = positive_part_inf_norm(g);
    rec.wall_time = seconds_since(t_start);
    report.records.push_back(rec);
    if (observer) observer(rec);

    if (rec.step_norm <= params.eps_step) {
      report.status = SolveStatus::StepTol;
      break;
    }
    if (rec.compl_ <= params.eps_compl && k + 1 >= params.k_min_compl) {
      report.status = SolveStatus::ComplTol;
      break;
    }

    mu = std::clamp(mu / params.tau, params.mu_min, params.mu_max);
    L = (L / params.tau).cwiseMax(params.L_min).cwiseMin(params.L_max);
  }

  report.x_final = x;
  report.lambda_final = lambda;
  report.v_final = v;
  report.total_time = seconds_since(t_start);
  return report;
}

KktResidual check_stationarity(const QdccProblem& prob,
                               const SolveReport& report) {
  return kkt_residual(prob, report.x_final, report.v_final,
                      report.lambda_final);
}

}  // namespace imba
