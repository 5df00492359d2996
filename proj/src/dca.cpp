#include "imba/dca.hpp"

#include <chrono>

namespace imba {

QdccProblem dca_subproblem(const QdccProblem& prob, const Vec& x_k) {
  require(x_k.size() == prob.n, "dca_subproblem: x_k has wrong dimension");
  QdccProblem sub = prob;
  sub.meta.note = "dca-convexified";

  // h0(x) ≥ h0(x_k) + ⟨ξ, x − x_k⟩ = ⟨ξ, x⟩, so −h0 is majorized by −⟨ξ, x⟩.
  Vec xi = Vec::Zero(prob.n);
  const double nx = x_k.norm();
  if (nx > 0.0) xi = (prob.reg.c_h0 / nx) * x_k;
  sub.reg.c_h0 = 0.0;
  if (sub.lin_shift.size() != prob.n) sub.lin_shift = Vec::Zero(prob.n);
  sub.lin_shift -= xi;

  // −p‖x‖² ≤ −p‖x_k‖² − 2p⟨x_k, x − x_k⟩ = p‖x_k‖² − 2p⟨x_k, x⟩.
  for (QuadConstraint& c : sub.constraints) {
    if (c.p_coef == 0.0) continue;
    if (c.lin.size() != prob.n) c.lin = Vec::Zero(prob.n);
    c.lin -= 2.0 * c.p_coef * x_k;
    c.d_sq -= c.p_coef * x_k.squaredNorm();
    c.p_coef = 0.0;
    // Roundoff in the shifted constant must not make x_k infeasible.
    const double at_xk = c.value(x_k);
    if (at_xk > 0.0) c.d_sq += at_xk;
  }
  return sub;
}

CompletedSquare completed_square(const QuadConstraint& c) {
  require(c.p_coef == 0.0, "completed_square: constraint is not convex");
  CompletedSquare out;
  out.h_tilde = c.h;
  if (c.lin.size() == c.h.size()) {
    // ⟨lin, x⟩ = 2⟨Bx, u⟩ with u = B⁻ᵀ lin / 2.
    const Vec u = c.B.transpose().partialPivLu().solve(0.5 * c.lin);
    out.h_tilde += u;
  }
  out.d_sq_tilde = c.d_sq + out.h_tilde.squaredNorm() - c.h.squaredNorm();
  return out;
}

SolveReport dca_solve(const QdccProblem& prob, const Vec& x0,
                      const DcaParams& params,
                      const IterationObserver& observer) {
  require(params.eps_step > 0.0, "dca: eps_step must be positive");
  require(params.k_max >= 1, "dca: k_max must be >= 1");
  prob.validate();
  require(feasibility_violation(prob, x0) == 0.0, "dca: x0 is infeasible");

  const auto t_start = std::chrono::steady_clock::now();
  SolveReport report;
  report.F_initial = eval_F(prob, x0);
  report.status = SolveStatus::IterLimit;

  Vec x = x0;
  Vec lambda = Vec::Zero(prob.m);
  Vec v = Vec::Zero(prob.n);
  for (int k = 0; k < params.k_max; ++k) {
    const QdccProblem sub = dca_subproblem(prob, x);
    const SolveReport inner = solve(sub, x, params.inner);
    // A failed inner solve still returns its last committed iterate, which is
    // feasible and no worse than x; only a solve with no progress is fatal.
    if (inner.status == SolveStatus::SubproblemFailure && inner.records.empty()) {
      report.status = SolveStatus::SubproblemFailure;
      report.message = "dca inner solve: " + inner.message;
      break;
    }

    Vec x_next = inner.x_final;
    const Vec g_next = eval_g(prob, x_next);
    if (positive_part_inf_norm(g_next) > 0.0) {
      // Only possible through roundoff when the subproblem step is tiny.
      report.message = "dca: inner point infeasible for the original problem";
      x_next = x;
    }

    IterateRecord rec;
    rec.k = k;
    rec.step_norm = (x_next - x).norm();
    rec.F = eval_F(prob, x_next);
    rec.inner_steps = inner.iterations();
    for (const IterateRecord& r : inner.records) rec.pg_iters += r.pg_iters;
    if (!inner.records.empty()) {
      rec.mu_k = inner.records.back().mu_k;
      rec.L_k_max = inner.records.back().L_k_max;
    }
    rec.phi_potential = ExtendedReal::plus_infinity();

    x = x_next;
    lambda = inner.lambda_final;
    v = inner.v_final;
    const Vec g = eval_g(prob, x);
    rec.compl_ = positive_part(-lambda.dot(g));
    rec.feas = positive_part_inf_norm(g);
    rec.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
    report.records.push_back(rec);
    if (observer) observer(rec);

    if (rec.step_norm <= params.eps_step) {
      report.status = SolveStatus::StepTol;
      break;
    }
  }
  report.x_final = x;
  report.lambda_final = lambda;
  report.v_final = v;
  report.total_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t_start)
                          .count();
  return report;
}

}  // namespace imba
