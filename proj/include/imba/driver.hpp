#pragma once

#include <functional>
#include <string>
#include <vector>

#include "imba/dual_solver.hpp"

namespace imba {

struct SolverParams {
  double mu_min = 1e-16;
  double mu_max = 1e16;
  double L_min = 1e-16;
  double L_max = 1e16;
  double beta_C = 1e10;
  double beta_S = 1e6;
  double alpha = 1e-6;
  double tau = 2.0;
  double eps_step = 1e-5;
  double eps_compl = 1e-7;
  int k_max = 10000;
  int k_min_compl = 500;
  PglsParams pgls;
  /// Evaluate the potential Φ at every committed iterate.
  bool compute_potential = true;

  void validate() const;
  InexactParams inexact() const { return {beta_C, beta_S}; }
};

struct IterateRecord {
  int k = 0;
  double F = 0.0;          ///< F(x^{k+1})
  double step_norm = 0.0;  ///< ‖x^{k+1} − x^k‖
  int inner_steps = 0;     ///< trials in the curvature search (j_k + 1)
  double mu_k = 0.0;
  double L_k_max = 0.0;
  double compl_ = 0.0;  ///< [−⟨λ^{k+1}, g(x^{k+1})⟩]₊
  double feas = 0.0;    ///< ‖[g(x^{k+1})]₊‖_∞
  ExtendedReal phi_potential;
  int pg_iters = 0;
  double wall_time = 0.0;  ///< seconds since the solve started
  int near_boundary = 0;   ///< rejected trials with tiny positive g
};

enum class SolveStatus { StepTol, ComplTol, IterLimit, SubproblemFailure };

std::string to_string(SolveStatus s);

struct SolveReport {
  std::vector<IterateRecord> records;
  SolveStatus status = SolveStatus::IterLimit;
  Vec x_final;
  Vec lambda_final;
  Vec v_final;
  double F_initial = 0.0;
  double total_time = 0.0;
  std::string message;

  double F_final() const {
    return records.empty() ? F_initial : records.back().F;
  }
  int iterations() const { return static_cast<int>(records.size()); }
};

struct CurvatureInit {
  double mu00 = 0.0;
  Vec L00;
};

/// Difference-quotient Lipschitz estimates of ∇f0 and each ∇f_i at x0 over
/// five seeded unit directions with t = 1e−4; L00 is scaled by 0.05.
CurvatureInit estimate_curvature_init(const QdccProblem& prob, const Vec& x0,
                                      const SolverParams& params);

using IterationObserver = std::function<void(const IterateRecord&)>;

/// Inexact moving-balls iteration from a feasible x0.
SolveReport solve(const QdccProblem& prob, const Vec& x0,
                  const SolverParams& params,
                  const IterationObserver& observer = {},
                  const PglsObserver& pgls_observer = {});

/// KKT residual at the final iterate with v = η and λ from the last solve.
KktResidual check_stationarity(const QdccProblem& prob,
                               const SolveReport& report);

}  // namespace imba
