#include "imba/dual_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace imba {
namespace {

void require_domain(const DualPoint& w, const ModelData& model, double c_phi,
                    const char* what) {
  require(w.lambda.size() == model.m() && w.eta.size() == model.n() &&
              w.zeta.size() == model.p(),
          std::string(what) + ": dual point has wrong dimensions");
  require(w.lambda.size() == 0 || w.lambda.minCoeff() >= 0.0,
          std::string(what) + ": lambda must be nonnegative");
  require(w.eta.size() == 0 || w.eta.cwiseAbs().maxCoeff() <= c_phi,
          std::string(what) + ": eta outside the c_phi box");
}

// r = Vλ + η + Aᵀζ + ξ
Vec dual_residual(const DualPoint& w, const ModelData& model) {
  Vec r = model.V_k * w.lambda + w.eta + model.xi_k;
  if (model.p() > 0) r += model.A_op.transpose() * w.zeta;
  return r;
}

double dual_scale(const DualPoint& w, const ModelData& model) {
  return model.mu + model.L.dot(w.lambda);
}

double theta_unchecked(const DualPoint& w, const ModelData& model) {
  const Vec r = dual_residual(w, model);
  const double s = dual_scale(w, model);
  return r.squaredNorm() / (2.0 * s) - w.eta.dot(model.x_k) -
         w.lambda.dot(model.g_xk) + 0.5 * w.zeta.squaredNorm() - model.g0_xk;
}

DualPoint grad_unchecked(const DualPoint& w, const ModelData& model) {
  const Vec r = dual_residual(w, model);
  const double s = dual_scale(w, model);
  DualPoint g;
  g.eta = r / s - model.x_k;
  g.zeta = w.zeta;
  if (model.p() > 0) g.zeta += model.A_op * r / s;
  g.lambda = model.V_k.transpose() * r / s -
             (r.squaredNorm() / (2.0 * s * s)) * model.L - model.g_xk;
  return g;
}

double clip_tau(double tau, const PglsParams& p) {
  return std::clamp(tau, p.tau_min, p.tau_max);
}

// Θ with ζ minimized out. With u = Vλ + η + ξ, s = μ + ⟨λ, L⟩ and
// M = AᵀA = W diag(σ) Wᵀ:
//   min_ζ Θ = ½ uᵀ(sI + M)⁻¹u − ⟨η, x_k⟩ − ⟨λ, g⟩ − g0,
// attained at ζ = AΔ with Δ = −(sI + M)⁻¹u, the Lagrangian minimizer's
// displacement. The gradient is (−G(x_k + Δ), −(x_k + Δ)).
class ReducedDual {
 public:
  explicit ReducedDual(const ModelData& model) : md_(model) {
    if (md_.p() > 0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(md_.A_op.transpose() * md_.A_op);
      W_ = es.eigenvectors();
      sigma_ = es.eigenvalues().cwiseMax(0.0);
    } else {
      sigma_ = Vec::Zero(md_.n());
    }
  }

  /// Displacement Δ = −(sI + AᵀA)⁻¹(Vλ + η + ξ).
  Vec displacement(const Vec& lambda, const Vec& eta) const {
    return eval(lambda, eta).delta;
  }

  struct Eval {
    double theta = 0.0;
    double s = 0.0;
    Vec c;  ///< u in the eigenbasis of AᵀA
    Vec delta;
  };

  Eval eval(const Vec& lambda, const Vec& eta) const {
    const Vec u = md_.V_k * lambda + eta + md_.xi_k;
    Eval e;
    e.s = md_.mu + md_.L.dot(lambda);
    e.c = md_.p() > 0 ? Vec(W_.transpose() * u) : u;
    const Vec t = e.c.array() / (sigma_.array() + e.s);
    e.delta = md_.p() > 0 ? Vec(-(W_ * t)) : Vec(-t);
    e.theta = 0.5 * e.c.dot(t) - eta.dot(md_.x_k) - lambda.dot(md_.g_xk) -
              md_.g0_xk;
    return e;
  }

  void gradient(const Eval& e, Vec& g_lambda, Vec& g_eta) const {
    g_lambda = -(md_.V_k.transpose() * e.delta) -
               (0.5 * e.delta.squaredNorm()) * md_.L - md_.g_xk;
    g_eta = -(md_.x_k + e.delta);
  }

  // Θ(next) − Θ(cur) assembled from the increments (δλ, δη) so that a
  // small decrease is not lost to cancellation between two evaluations.
  // With c the eigen-coordinates of u and σ the spectrum of AᵀA,
  //   ½c₁²/(σ+s₁) − ½c₀²/(σ+s₀) = ½δc(2c₀+δc)/(σ+s₁) − ½c₀²δs/((σ+s₀)(σ+s₁)).
  double difference(const Vec& lam0, const Vec& eta0, const Eval& e0,
                    const Vec& lam1, const Vec& eta1, const Eval& e1) const {
    const Vec dlam = lam1 - lam0;
    const Vec deta = eta1 - eta0;
    const Vec du = md_.V_k * dlam + deta;
    const Vec dc = md_.p() > 0 ? Vec(W_.transpose() * du) : du;
    const double ds = md_.L.dot(dlam);
    const auto den0 = sigma_.array() + e0.s;
    const auto den1 = sigma_.array() + e1.s;
    const double quad =
        0.5 * (dc.array() * (2.0 * e0.c + dc).array() / den1).sum() -
        0.5 * ds * (e0.c.array().square() / (den0 * den1)).sum();
    return quad - deta.dot(md_.x_k) - dlam.dot(md_.g_xk);
  }

  DualPoint point(const Vec& lambda, const Vec& eta, const Eval& e) const {
    DualPoint w{lambda, eta, Vec::Zero(md_.p())};
    if (md_.p() > 0) w.zeta = md_.A_op * e.delta;
    return w;
  }

 private:
  const ModelData& md_;
  Mat W_;
  Vec sigma_;
};

// PGls works on (λ̃, η) with λ̃ = d ⊙ λ.
struct IterState {
  Vec lam_s;
  Vec lambda;
  Vec eta;
  ReducedDual::Eval ev;
};

struct StepOutcome {
  IterState next;
  double tau = 0.0;
  double step_sq = 0.0;
  double decrease = 0.0;
  int backtracks = 0;
};

StepOutcome backtracking_step(const IterState& cur, const ReducedDual& rd,
                              const Vec& d, double c_phi, double tau0,
                              const PglsParams& params, int& evals) {
  Vec g_lambda, g_eta;
  rd.gradient(cur.ev, g_lambda, g_eta);
  const Vec g_lam_s = g_lambda.cwiseQuotient(d);
  double tau = tau0;
  for (int nu = 0; nu <= params.max_backtracks; ++nu) {
    StepOutcome out;
    out.next.lam_s = (cur.lam_s - g_lam_s / tau).cwiseMax(0.0);
    out.next.lambda = out.next.lam_s.cwiseQuotient(d);
    out.next.eta = (cur.eta - g_eta / tau).cwiseMax(-c_phi).cwiseMin(c_phi);
    out.next.ev = rd.eval(out.next.lambda, out.next.eta);
    ++evals;
    if (!std::isfinite(out.next.ev.theta)) {
      std::ostringstream msg;
      msg << "pgls: non-finite dual objective at tau=" << tau
          << ", |lambda|=" << out.next.lambda.norm();
      throw NumericalFailure(msg.str());
    }
    out.step_sq = (out.next.lam_s - cur.lam_s).squaredNorm() +
                  (out.next.eta - cur.eta).squaredNorm();
    out.decrease = rd.difference(cur.lambda, cur.eta, cur.ev, out.next.lambda,
                                 out.next.eta, out.next.ev);
    if (out.decrease <= -0.5 * params.delta * tau * out.step_sq) {
      out.tau = tau;
      out.backtracks = nu;
      return out;
    }
    tau *= params.rho;
  }
  throw NumericalFailure("pgls: line search exceeded the backtracking limit");
}

bool candidate_ok(const IterState& st, const ModelData& model,
                  const QdccProblem& prob, const PglsParams& params,
                  const InexactParams& inexact) {
  const Vec y = model.x_k + st.ev.delta;
  const InexactTerms t = inexact_terms(y, st.eta, st.lambda, model, prob, inexact);
  if (!t.satisfied()) return false;
  if (params.stationarity_tol > 0.0 && t.S > params.stationarity_tol)
    return false;
  if (params.violation_tol > 0.0 && t.C > params.violation_tol) return false;
  return true;
}

void fill_candidate(DualSolveResult& res, const IterState& st,
                    const ReducedDual& rd, const ModelData& model) {
  res.w = rd.point(st.lambda, st.eta, st.ev);
  res.x_candidate = model.x_k + st.ev.delta;
  res.v_candidate = st.eta;
  res.lambda_candidate = st.lambda;
}

IterState start_state(const DualPoint& w0, const ReducedDual& rd,
                      const Vec& d) {
  IterState st{w0.lambda.cwiseProduct(d), w0.lambda, w0.eta, {}};
  st.ev = rd.eval(st.lambda, st.eta);
  if (!std::isfinite(st.ev.theta)) throw NumericalFailure("pgls: non-finite start");
  return st;
}

}  // namespace

double dual_theta(const DualPoint& w, const ModelData& model,
                  const QdccProblem& prob) {
  require_domain(w, model, prob.reg.c_phi, "dual_theta");
  return theta_unchecked(w, model);
}

double dual_Xi(const DualPoint& w, const ModelData& model,
               const QdccProblem& prob) {
  return dual_theta(w, model, prob);
}

DualPoint dual_grad(const DualPoint& w, const ModelData& model,
                    const QdccProblem& prob) {
  require_domain(w, model, prob.reg.c_phi, "dual_grad");
  return grad_unchecked(w, model);
}

DualPoint prox_map(const DualPoint& w, double tau, double c_phi) {
  require(tau > 0.0, "prox_map: tau must be positive");
  DualPoint out;
  out.lambda = w.lambda.cwiseMax(0.0);
  out.eta = w.eta.cwiseMax(-c_phi).cwiseMin(c_phi);
  out.zeta = w.zeta;
  return out;
}

PrimalRecovery recover_primal(const DualPoint& w, const ModelData& model) {
  const Vec r = dual_residual(w, model);
  return {model.x_k - r / dual_scale(w, model), w.eta};
}

DualPoint minimize_zeta(const DualPoint& w, const ModelData& model) {
  const ReducedDual rd(model);
  return rd.point(w.lambda, w.eta, rd.eval(w.lambda, w.eta));
}

double initial_tau(const ModelData& model, const PglsParams& params) {
  const double nv = spectral_norm_estimate(model.V_k, 50);
  return clip_tau(params.tau00_scale * nv * nv, params);
}

Vec lambda_scaling(const ModelData& model, const DualPoint& w) {
  const ReducedDual rd(model);
  const double dn = rd.displacement(w.lambda, w.eta).norm();
  Vec d(model.m());
  for (int i = 0; i < model.m(); ++i) {
    d(i) = model.V_k.col(i).norm() + model.L(i) * dn;
    if (!(d(i) > 0.0) || !std::isfinite(d(i))) d(i) = 1.0;
  }
  return d;
}

namespace {

double scaled_initial_tau(const ModelData& model, const Vec& d,
                          const PglsParams& params) {
  const Mat Vs = model.V_k * d.cwiseInverse().asDiagonal();
  const double nv = spectral_norm_estimate(Vs, 50);
  return clip_tau(params.tau00_scale * nv * nv, params);
}

}  // namespace

DualSolveResult pgls_solve(const ModelData& model, const QdccProblem& prob,
                           const DualPoint& w0, const PglsParams& params,
                           const InexactParams& inexact,
                           const PglsObserver& observer) {
  require_domain(w0, model, prob.reg.c_phi, "pgls_solve");
  const ReducedDual rd(model);
  const Vec d = lambda_scaling(model, w0);
  DualSolveResult res;
  IterState st = start_state(w0, rd, d);
  double tau0 = scaled_initial_tau(model, d, params);

  for (int l = 0; l < params.l_max; ++l) {
    if (candidate_ok(st, model, prob, params, inexact)) {
      fill_candidate(res, st, rd, model);
      res.status = DualStatus::InexactAccepted;
      return res;
    }
    StepOutcome step = backtracking_step(st, rd, d, prob.reg.c_phi, tau0,
                                         params, res.linesearch_evals);
    ++res.inner_pg_iters;
    res.last_tau = step.tau;
    if (observer) {
      const DualPoint w_prev = rd.point(st.lambda, st.eta, st.ev);
      const DualPoint w_next = rd.point(step.next.lambda, step.next.eta,
                                        step.next.ev);
      observer({l, step.backtracks, step.tau, st.ev.theta, step.next.ev.theta,
                step.step_sq, step.decrease, &w_prev, &w_next, &d});
    }
    // λ can live on a much smaller scale than η, so only an exactly
    // repeated iterate counts as a stall.
    const bool stalled = step.step_sq == 0.0;
    st = std::move(step.next);
    tau0 = clip_tau(step.tau / params.rho, params);
    if (stalled) {
      fill_candidate(res, st, rd, model);
      res.status = candidate_ok(st, model, prob, params, inexact)
                       ? DualStatus::InexactAccepted
                       : DualStatus::Stalled;
      return res;
    }
  }
  fill_candidate(res, st, rd, model);
  res.status = candidate_ok(st, model, prob, params, inexact)
                   ? DualStatus::InexactAccepted
                   : DualStatus::IterLimit;
  return res;
}

DualSolveResult pgls_minimize(const ModelData& model, const QdccProblem& prob,
                              const DualPoint& w0, const PglsParams& params,
                              double tol) {
  require_domain(w0, model, prob.reg.c_phi, "pgls_minimize");
  const ReducedDual rd(model);
  const Vec d = lambda_scaling(model, w0);
  DualSolveResult res;
  IterState st = start_state(w0, rd, d);
  double tau0 = scaled_initial_tau(model, d, params);
  res.status = DualStatus::IterLimit;
  for (int l = 0; l < params.l_max; ++l) {
    StepOutcome step = backtracking_step(st, rd, d, prob.reg.c_phi, tau0,
                                         params, res.linesearch_evals);
    ++res.inner_pg_iters;
    res.last_tau = step.tau;
    const double mapping = step.tau * std::sqrt(step.step_sq);
    st = std::move(step.next);
    tau0 = clip_tau(step.tau / params.rho, params);
    if (mapping <= tol) {
      res.status = DualStatus::InexactAccepted;
      break;
    }
  }
  fill_candidate(res, st, rd, model);
  return res;
}

}  // namespace imba
