#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "imba/types.hpp"

namespace imba {

/// Coefficients of the DC regularizer: h0(x) = c_h0·‖x‖₂ (subtracted) and
/// φ(x) = c_phi·‖x‖₁ (added).
struct Regularizer {
  double c_h0 = 0.01;
  double c_phi = 0.01;
};

/// f0(x) = ‖Y0 x‖² + 2·omega0·⟨b0_unit, x⟩. Y0 may have zero rows.
struct QuadraticObjective {
  Mat Y0;
  Vec b0_unit;
  double omega0 = 0.0;
};

/// f0(x) = Σ_i log(1 + 4 (Ax − b)_i²).
struct StudentTObjective {
  Mat A;
  Vec b;
};

using ObjectiveSmooth = std::variant<QuadraticObjective, StudentTObjective>;

/// g(x) = ‖Bx + h‖² + ⟨lin, x⟩ − p_coef·‖x‖² − d_sq, stored in factored
/// form. `lin` is empty for generated instances; the DCA convexification
/// uses it to hold the linearized concave part. The convex part is
/// f(x) = ‖Bx + h‖² + ⟨lin, x⟩ − d_sq and the subtracted part p_coef·‖x‖².
struct QuadConstraint {
  Mat B;
  Vec h;
  double d_sq = 0.0;
  double p_coef = 0.0;
  Vec lin;

  Mat Q() const { return B.transpose() * B; }
  Vec b_lin() const {
    Vec b = B.transpose() * h;
    if (lin.size() == b.size()) b += 0.5 * lin;
    return b;
  }
  double c_const() const { return h.squaredNorm() - d_sq; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// Same function through xᵀ(Q − p_coef·I)x + 2⟨b_lin, x⟩ + c_const.
  double value_expanded(const Vec& x) const;

  double convex_part(const Vec& x) const;
  Vec convex_part_gradient(const Vec& x) const;
};

struct InstanceMeta {
  std::uint64_t seed = 0;
  double cond_exponent = 0.0;
  std::string note;
};

/// One QDCC instance:
///   minimize  f0(x) + ⟨lin_shift, x⟩ + const_shift − c_h0‖x‖ + c_phi‖x‖₁
///   s.t.      g_i(x) ≤ 0,  i = 1..m.
/// The shift terms are empty/zero for generated instances; the DCA
/// convexification uses them to carry the linearized concave part.
struct QdccProblem {
  int n = 0;
  int m = 0;
  ObjectiveSmooth objective;
  Regularizer reg;
  std::vector<QuadConstraint> constraints;
  InstanceMeta meta;
  Vec lin_shift;
  double const_shift = 0.0;

  /// Checks dimensions and coefficient signs; throws std::invalid_argument.
  void validate() const;

  bool is_quadratic() const {
    return std::holds_alternative<QuadraticObjective>(objective);
  }
};

/// Residuals of the stationarity system 0 ∈ ξ + ∂φ(x) + Vλ, λ ⊥ g(x) ≤ 0.
struct KktResidual {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double feasibility = 0.0;
};

// Objective pieces. All throw std::invalid_argument on non-finite x.
double eval_f0(const QdccProblem& prob, const Vec& x);
Vec grad_f0(const QdccProblem& prob, const Vec& x);
double eval_h0(const QdccProblem& prob, const Vec& x);
double eval_g0(const QdccProblem& prob, const Vec& x);
double eval_phi(const QdccProblem& prob, const Vec& x);
double eval_F(const QdccProblem& prob, const Vec& x);

/// ξ ∈ ∂g0(x): ∇f0(x) − c_h0·x/‖x‖, with −c_h0·e₁ selected at x = 0.
Vec subgrad_g0(const QdccProblem& prob, const Vec& x);

/// Diagonal of ∇²θ(Ax − b) for the Student-t loss, i.e.
/// (8 − 32u²)/(1 + 4u²)². Empty for the quadratic objective.
Vec studentt_curvature(const QdccProblem& prob, const Vec& x);

Vec eval_g(const QdccProblem& prob, const Vec& x);
/// n×m matrix whose column i is ∇g_i(x).
Mat jac_g(const QdccProblem& prob, const Vec& x);

double feasibility_violation(const QdccProblem& prob, const Vec& x);

/// Uses ξ = subgrad_g0(x) and V = jac_g(x); `v` is the caller's element of
/// ∂φ(x). Throws on negative multipliers.
KktResidual kkt_residual(const QdccProblem& prob, const Vec& x, const Vec& v,
                         const Vec& lambda);

/// The element of ∂φ(x) closest to −(ξ + Vλ). Coordinates with
/// |x_j| ≤ zero_tol are treated as zero.
Vec best_phi_subgradient(const QdccProblem& prob, const Vec& x,
                         const Vec& lambda, double zero_tol = 0.0);

}  // namespace imba
