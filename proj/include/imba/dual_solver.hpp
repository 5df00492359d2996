#pragma once

#include <functional>

#include "imba/majorization.hpp"

namespace imba {

/// Dual variable of the model subproblem: λ for the ball constraints,
/// η for φ (|η_j| ≤ c_phi), ζ for the curvature operator.
struct DualPoint {
  Vec lambda;
  Vec eta;
  Vec zeta;

  static DualPoint zeros(int m, int n, int p) {
    return {Vec::Zero(m), Vec::Zero(n), Vec::Zero(p)};
  }
  double squared_distance(const DualPoint& o) const {
    return (lambda - o.lambda).squaredNorm() + (eta - o.eta).squaredNorm() +
           (zeta - o.zeta).squaredNorm();
  }
  double squared_norm() const {
    return lambda.squaredNorm() + eta.squaredNorm() + zeta.squaredNorm();
  }
};

/// Proximal-gradient-with-line-search settings. tau is the inverse step.
struct PglsParams {
  double delta = 1e-6;
  double rho = 10.0;
  double tau_min = 1e-24;
  double tau_max = 1e24;
  int l_max = 2000;
  double tau00_scale = 1e-8;  ///< τ_{0,0} = tau00_scale·‖V‖²
  int max_backtracks = 200;
  /// When positive, termination additionally requires S ≤ stationarity_tol
  /// and C ≤ violation_tol (used for high-accuracy diagnostics).
  double stationarity_tol = 0.0;
  double violation_tol = 0.0;
};

enum class DualStatus { InexactAccepted, IterLimit, Stalled };

struct DualSolveResult {
  DualPoint w;
  Vec x_candidate;
  Vec v_candidate;
  Vec lambda_candidate;
  DualStatus status = DualStatus::IterLimit;
  int inner_pg_iters = 0;
  int linesearch_evals = 0;
  double last_tau = 0.0;
};

/// One accepted proximal-gradient step, reported to an observer.
struct PglsStepInfo {
  int l = 0;
  int backtracks = 0;
  double tau = 0.0;
  double xi_before = 0.0;
  double xi_after = 0.0;
  double step_sq = 0.0;  ///< in the scaled variables (d ⊙ λ, η)
  double decrease = 0.0;  ///< xi_after − xi_before, evaluated as a difference
  const DualPoint* w_prev = nullptr;
  const DualPoint* w_next = nullptr;
  const Vec* lambda_scale = nullptr;  ///< d
};

using PglsObserver = std::function<void(const PglsStepInfo&)>;

/// Θ(w) = ‖r‖²/(2s) − ⟨η, x_k⟩ − ⟨λ, g(x_k)⟩ + ½‖ζ‖² − g0(x_k) with
/// r = Vλ + η + Aᵀζ + ξ and s = μ + ⟨λ, L⟩.
double dual_theta(const DualPoint& w, const ModelData& model,
                  const QdccProblem& prob);
/// Θ plus the indicators of λ ≥ 0 and ‖η‖_∞ ≤ c_phi. Throws when w is
/// outside that domain.
double dual_Xi(const DualPoint& w, const ModelData& model,
               const QdccProblem& prob);

DualPoint dual_grad(const DualPoint& w, const ModelData& model,
                    const QdccProblem& prob);

/// Projection onto R₊ᵐ × [−c_phi, c_phi]ⁿ × Rᵖ. `tau` is part of the prox
/// signature; the projections do not depend on it.
DualPoint prox_map(const DualPoint& w, double tau, double c_phi);

struct PrimalRecovery {
  Vec x;
  Vec v;
};

/// x = x_k − r/s (the Lagrangian minimizer) and v = η.
PrimalRecovery recover_primal(const DualPoint& w, const ModelData& model);

/// Same (λ, η) with ζ replaced by its minimizer A·Δ, where
/// Δ = −(sI + AᵀA)⁻¹(Vλ + η + ξ).
DualPoint minimize_zeta(const DualPoint& w, const ModelData& model);

/// τ_{0,0} from the spectral norm of V_k.
double initial_tau(const ModelData& model, const PglsParams& params);

/// Per-constraint scale d_i = ‖V_i‖ + L_i‖Δ‖ + (1 if both vanish) used
/// to precondition λ; Δ is the displacement recovered from `w`.
Vec lambda_scaling(const ModelData& model, const DualPoint& w);

/// Runs PGls on the dual, stopping at the first iterate whose recovered
/// primal triple passes the inexactness test.
///
/// Two reformulations of the dual are applied before the proximal-gradient
/// iteration, both exact: ζ is minimized out in closed form (the returned ζ
/// is always the minimizer for the returned (λ, η)), and λ is written as
/// λ = λ̃/d with d from lambda_scaling at w0. The steps, the sufficient
/// decrease test and τ_{0,0} = tau00_scale·‖V diag(1/d)‖² all refer to the
/// variables (λ̃, η).
DualSolveResult pgls_solve(const ModelData& model, const QdccProblem& prob,
                           const DualPoint& w0, const PglsParams& params,
                           const InexactParams& inexact,
                           const PglsObserver& observer = {});

/// Runs PGls until the projected-gradient norm ‖τ(w − w⁺)‖ ≤ tol (or the
/// iteration limit). Used to obtain reference dual solutions.
DualSolveResult pgls_minimize(const ModelData& model, const QdccProblem& prob,
                              const DualPoint& w0, const PglsParams& params,
                              double tol);

}  // namespace imba
