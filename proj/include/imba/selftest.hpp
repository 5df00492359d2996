#pragma once

#include <functional>
#include <string>
#include <vector>

#include "imba/dual_solver.hpp"
#include "imba/rng.hpp"

namespace imba {

using ScalarFn = std::function<double(const Vec&)>;
using GradFn = std::function<Vec(const Vec&)>;

/// ‖grad(x) − D_h f(x)‖_∞ / max(1, ‖D_h f(x)‖_∞) with D_h the central
/// difference of step h.
double fd_gradient_error(const ScalarFn& f, const GradFn& grad, const Vec& x,
                         double h = 1e-6);

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      ///< largest measured error
  double tolerance = 0.0;
  int cases = 0;
  std::string detail;
};

/// Worst FD error of `grad` against `f` over `points` draws from `sample`.
SuiteResult fd_suite(const std::string& name, const ScalarFn& f,
                     const GradFn& grad, const std::function<Vec()>& sample,
                     int points, double tolerance, double h = 1e-6);

// Dual points flattened as (λ, η, ζ).
Vec flatten(const DualPoint& w);
DualPoint unflatten(const Vec& v, int m, int n, int p);

/// A strongly convex model on R² with one ball constraint, for checking
/// strong duality against a brute-force primal oracle.
struct TinyModel {
  QdccProblem prob;
  ModelData model;
};

TinyModel make_tiny_model(std::uint64_t seed);

/// Minimum of the model objective over {G ≤ 0}: grid of the given step on
/// the ball's bounding box, then zoomed refinement in the interior and an
/// angle search on the boundary circle.
double tiny_primal_oracle(const TinyModel& t, double grid_step = 1e-3);

struct SelftestOptions {
  std::uint64_t seed = 20240501;
  int fd_points = 20;
  int identity_pairs = 100;
  int tiny_instances = 5;
};

SuiteResult suite_grad_f0(const SelftestOptions& opt);
SuiteResult suite_grad_f0_studentt(const SelftestOptions& opt);
SuiteResult suite_jac_g(const SelftestOptions& opt);
SuiteResult suite_dual_grad(const SelftestOptions& opt);
SuiteResult suite_identity_T0(const SelftestOptions& opt);
SuiteResult suite_identity_T(const SelftestOptions& opt);
SuiteResult suite_prox(const SelftestOptions& opt);
SuiteResult suite_strong_duality(const SelftestOptions& opt);

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt = {});

}  // namespace imba
