#include "imba/majorization.hpp"

#include <algorithm>
#include <cmath>

namespace imba {
namespace {

void require_nonnegative(const Vec& lambda, const char* what) {
  if (lambda.size() > 0 && lambda.minCoeff() < 0.0) {
    throw std::invalid_argument(std::string(what) +
                                ": lambda must be nonnegative");
  }
}

}  // namespace

ModelData build_model(const QdccProblem& prob, const Vec& x_k, double mu,
                      const Vec& L) {
  require(mu > 0.0, "build_model: mu must be positive");
  require(L.size() == prob.m, "build_model: L has wrong dimension");
  require(L.size() == 0 || L.minCoeff() >= 0.0,
          "build_model: L must be nonnegative");
  ModelData md;
  md.x_k = x_k;
  md.g_xk = eval_g(prob, x_k);
  require(positive_part_inf_norm(md.g_xk) == 0.0,
          "build_model: x_k must be feasible");
  md.g0_xk = eval_g0(prob, x_k);
  md.phi_xk = eval_phi(prob, x_k);
  md.xi_k = subgrad_g0(prob, x_k);
  md.V_k = jac_g(prob, x_k);
  md.mu = mu;
  md.L = L;
  if (const auto* q = std::get_if<QuadraticObjective>(&prob.objective)) {
    md.A_op = q->Y0;
    md.a_kind = q->Y0.rows() > 0 ? CurvatureOperator::FixedY0
                                 : CurvatureOperator::Zero;
  } else {
    const auto& st = std::get<StudentTObjective>(prob.objective);
    const Vec omega = studentt_curvature(prob, x_k);
    const Vec weights = omega.cwiseMax(0.0).cwiseSqrt();
    md.A_op = weights.asDiagonal() * st.A;
    md.a_kind = CurvatureOperator::ScaledRows;
  }
  return md;
}

Vec big_G(const Vec& x, const ModelData& model) {
  const Vec d = x - model.x_k;
  return model.g_xk + model.V_k.transpose() * d +
         (0.5 * d.squaredNorm()) * model.L;
}

double model_objective(const Vec& x, const ModelData& model,
                       const QdccProblem& prob) {
  const Vec d = x - model.x_k;
  double val = model.g0_xk + model.xi_k.dot(d) + 0.5 * model.mu * d.squaredNorm();
  if (model.p() > 0) val += 0.5 * (model.A_op * d).squaredNorm();
  return val + eval_phi(prob, x);
}

double residual_S(const Vec& x, const Vec& v, const Vec& lambda,
                  const ModelData& model) {
  require_nonnegative(lambda, "residual_S");
  const Vec d = x - model.x_k;
  Vec r = model.xi_k + (model.mu + model.L.dot(lambda)) * d + v +
          model.V_k * lambda;
  if (model.p() > 0) r += model.A_op.transpose() * (model.A_op * d);
  return r.norm();
}

double residual_C(const Vec& x, const Vec& lambda, const ModelData& model) {
  require_nonnegative(lambda, "residual_C");
  const Vec G = big_G(x, model);
  return positive_part(-lambda.dot(G)) + positive_part_inf_norm(G);
}

InexactTerms inexact_terms(const Vec& y, const Vec& v, const Vec& lambda,
                           const ModelData& model, const QdccProblem& prob,
                           const InexactParams& params) {
  InexactTerms t;
  const double dist = (y - model.x_k).norm();
  t.model_value = model_objective(y, model, prob);
  t.model_value_at_xk = model.F_xk();
  t.C = residual_C(y, lambda, model);
  t.C_bound = 0.5 * params.beta_C * dist * dist;
  t.S = residual_S(y, v, lambda, model);
  t.S_bound = params.beta_S * dist;
  return t;
}

bool check_inexact(const Vec& y, const Vec& v, const Vec& lambda,
                   const ModelData& model, const QdccProblem& prob,
                   const InexactParams& params) {
  return inexact_terms(y, v, lambda, model, prob, params).satisfied();
}

AcceptVerdict accept_step(const Vec& y, const ModelData& model,
                          const QdccProblem& prob, double alpha) {
  AcceptVerdict v;
  const Vec g = eval_g(prob, y);
  const double worst = g.size() > 0 ? g.maxCoeff() : 0.0;
  if (worst > 0.0) {
    v.infeasible = true;
    const double scale = 1.0 + model.g_xk.cwiseAbs().maxCoeff();
    v.near_boundary = worst <= 1e-12 * scale;
    v.F_y = eval_F(prob, y);
    return v;
  }
  v.F_y = eval_F(prob, y);
  const double step2 = (y - model.x_k).squaredNorm();
  if (v.F_y <= model.F_xk() - 0.5 * alpha * step2) {
    v.accepted = true;
  } else {
    v.insufficient_decrease = true;
  }
  return v;
}

ExtendedReal potential_T0(const PotentialPoint& z, const QdccProblem& prob) {
  const Vec grad_s = grad_f0(prob, z.s);
  const Vec u = grad_s - z.xi;
  const double tol = 1e-12 * (1.0 + grad_s.norm() + z.xi.norm());
  // h0*(u) is the indicator of the ball of radius c_h0.
  if (u.norm() > prob.reg.c_h0 + tol) return ExtendedReal::plus_infinity();
  return ExtendedReal::finite(z.xi.dot(z.x) + eval_f0(prob, z.s) -
                              grad_s.dot(z.s));
}

bool ConstraintPotential::any_infinite() const {
  return std::any_of(infinite.begin(), infinite.end(),
                     [](bool b) { return b; });
}

ConstraintPotential potential_T(const PotentialPoint& z,
                                const QdccProblem& prob) {
  require(z.L.size() == 0 || z.L.minCoeff() >= 0.0,
          "potential_T: L must be nonnegative");
  ConstraintPotential out;
  out.value.resize(prob.m);
  out.infinite.assign(prob.m, false);
  const double dist2 = (z.x - z.s).squaredNorm();
  for (int i = 0; i < prob.m; ++i) {
    const QuadConstraint& c = prob.constraints[i];
    const Vec grad_f = c.convex_part_gradient(z.s);
    const Vec u = grad_f - z.V.col(i);
    double conj = 0.0;
    if (c.p_coef > 0.0) {
      // h_i(s) = p‖s‖², so h_i*(u) = ‖u‖²/(4p).
      conj = u.squaredNorm() / (4.0 * c.p_coef);
    } else {
      const double tol = 1e-12 * (1.0 + grad_f.norm() + z.V.col(i).norm());
      if (u.norm() > tol) {
        out.infinite[i] = true;
        out.value(i) = 0.0;
        continue;
      }
    }
    out.value(i) = z.V.col(i).dot(z.x) + c.convex_part(z.s) - grad_f.dot(z.s) +
                   conj + 0.5 * dist2 * z.L(i);
  }
  return out;
}

ExtendedReal potential_Phi(const PotentialPoint& z, const QdccProblem& prob) {
  const ExtendedReal t0 = potential_T0(z, prob);
  if (t0.infinite) return t0;
  const ConstraintPotential t = potential_T(z, prob);
  if (t.any_infinite()) return ExtendedReal::plus_infinity();
  const double scale = 1.0 + eval_g(prob, z.s).cwiseAbs().maxCoeff();
  if (t.value.size() > 0 && t.value.maxCoeff() > 1e-10 * scale) {
    return ExtendedReal::plus_infinity();
  }
  return ExtendedReal::finite(eval_phi(prob, z.x) + t0.value);
}

}  // namespace imba
