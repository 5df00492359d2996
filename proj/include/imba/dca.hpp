#pragma once

#include "imba/driver.hpp"

namespace imba {

struct DcaParams {
  double eps_step = 1e-5;
  int k_max = 1000;
  /// Settings for the inner convex solves. The default stops on a 1e−8
  /// step and never on the complementarity rule. The smaller beta_C keeps
  /// candidates with visible constraint violation from being accepted
  /// while the bound (β_C/2)‖Δ‖² stays above the roundoff floor of C.
  SolverParams inner = default_inner();

  static SolverParams default_inner() {
    SolverParams p;
    p.eps_step = 1e-8;
    p.beta_C = 1e2;
    p.k_min_compl = p.k_max + 1;
    p.compute_potential = false;
    return p;
  }
};

/// Convex subproblem at x_k: h0 and the p_coef‖x‖² parts linearized at x_k.
/// Constraints keep B and h and carry the linearization in `lin`
/// (lin −= 2p·x_k, d_sq −= p‖x_k‖², p_coef = 0); the objective gets the
/// linear shift −ξ with ξ ∈ ∂h0(x_k) (ξ = 0 at x_k = 0). The subproblem
/// objective equals F at x_k and majorizes it everywhere.
QdccProblem dca_subproblem(const QdccProblem& prob, const Vec& x_k);

/// A convex constraint ‖Bx + h‖² + ⟨lin, x⟩ − d_sq written as
/// ‖Bx + h_tilde‖² − d_sq_tilde (requires p_coef = 0 and B nonsingular).
struct CompletedSquare {
  Vec h_tilde;
  double d_sq_tilde = 0.0;
};

CompletedSquare completed_square(const QuadConstraint& c);

/// DCA outer loop; each convex subproblem is solved by the moving-balls
/// driver started at x_k. Records use the original objective F.
SolveReport dca_solve(const QdccProblem& prob, const Vec& x0,
                      const DcaParams& params,
                      const IterationObserver& observer = {});

}  // namespace imba
