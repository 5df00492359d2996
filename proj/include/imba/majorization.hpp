#pragma once

#include <vector>

#include "imba/problem.hpp"

namespace imba {

/// How the curvature operator A in Q = μI + AᵀA was chosen.
enum class CurvatureOperator { Zero, FixedY0, ScaledRows };

/// Data of the strongly convex model built at a feasible iterate x_k:
///   F_k(x) = g0(x_k) + ⟨ξ, x − x_k⟩ + (μ/2)‖x − x_k‖² + ½‖A(x − x_k)‖² + φ(x)
///   G(x)   = g(x_k) + Vᵀ(x − x_k) + ½‖x − x_k‖²·L  ≤ 0.
struct ModelData {
  Vec x_k;
  double g0_xk = 0.0;
  double phi_xk = 0.0;
  Vec g_xk;
  Vec xi_k;
  Mat V_k;
  double mu = 1.0;
  Vec L;
  Mat A_op;  ///< p×n, p may be zero
  CurvatureOperator a_kind = CurvatureOperator::Zero;

  int n() const { return static_cast<int>(x_k.size()); }
  int m() const { return static_cast<int>(g_xk.size()); }
  int p() const { return static_cast<int>(A_op.rows()); }
  double F_xk() const { return g0_xk + phi_xk; }
};

/// Evaluates ξ, V, g, g0 and the curvature operator at x_k. The quadratic
/// objective uses A = Y0; Student-t uses A = diag([ω]₊^{1/2})·A with ω the
/// diagonal of ∇²θ(Ax_k − b).
ModelData build_model(const QdccProblem& prob, const Vec& x_k, double mu,
                      const Vec& L);

struct InexactParams {
  double beta_C = 1e10;
  double beta_S = 1e6;
};

Vec big_G(const Vec& x, const ModelData& model);
double model_objective(const Vec& x, const ModelData& model,
                       const QdccProblem& prob);
double residual_S(const Vec& x, const Vec& v, const Vec& lambda,
                  const ModelData& model);
double residual_C(const Vec& x, const Vec& lambda, const ModelData& model);

/// Individual terms of the inexactness test, for reporting.
struct InexactTerms {
  double model_value = 0.0;
  double model_value_at_xk = 0.0;
  double C = 0.0;
  double C_bound = 0.0;
  double S = 0.0;
  double S_bound = 0.0;

  bool satisfied() const {
    return model_value <= model_value_at_xk && C <= C_bound && S <= S_bound;
  }
};

InexactTerms inexact_terms(const Vec& y, const Vec& v, const Vec& lambda,
                           const ModelData& model, const QdccProblem& prob,
                           const InexactParams& params);
bool check_inexact(const Vec& y, const Vec& v, const Vec& lambda,
                   const ModelData& model, const QdccProblem& prob,
                   const InexactParams& params);

struct AcceptVerdict {
  bool accepted = false;
  bool infeasible = false;             ///< g(y) has a positive entry
  bool insufficient_decrease = false;  ///< feasible but no α-decrease
  bool near_boundary = false;          ///< max g(y) in (0, 1e−12·scale]
  double F_y = 0.0;
};

/// Feasibility is exact on computed values: g(y) ≤ 0.
AcceptVerdict accept_step(const Vec& y, const ModelData& model,
                          const QdccProblem& prob, double alpha);

/// The point z = (x, s, V, L, ξ) at which the potential is evaluated.
struct PotentialPoint {
  Vec x;
  Vec s;
  Mat V;
  Vec L;
  Vec xi;
};

ExtendedReal potential_T0(const PotentialPoint& z, const QdccProblem& prob);

struct ConstraintPotential {
  Vec value;
  std::vector<bool> infinite;

  bool any_infinite() const;
};

ConstraintPotential potential_T(const PotentialPoint& z,
                                const QdccProblem& prob);

/// Φ(z) = φ(x) + T0(z) + δ_{R₋}(T(z)). The nonpositivity test on T allows
/// 1e−10·(1 + ‖g(s)‖_∞) of roundoff.
ExtendedReal potential_Phi(const PotentialPoint& z, const QdccProblem& prob);

}  // namespace imba
