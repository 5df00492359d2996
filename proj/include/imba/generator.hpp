#pragma once

#include <cstdint>
#include <variant>

#include "imba/problem.hpp"
#include "imba/rng.hpp"

namespace imba {

struct QuadraticKind {
  double omega0 = 10.0;
};

struct StudentTKind {
  int N = 0;  ///< number of observations (rows of A)
};

struct GenConfig {
  int n = 0;
  int m = 0;
  double cond_exponent = 4.0;
  std::variant<QuadraticKind, StudentTKind> objective_kind = QuadraticKind{};
  std::uint64_t seed = 0;
  double p_coef = 1e5;
  Regularizer reg;

  void validate() const;
};

/// Y = I − 2yyᵀ/‖y‖² with y uniform in (−1, 1)ⁿ.
Mat gen_householder(int n, CounterRng& rng);

struct ConstraintFactors {
  Vec diag;  ///< shuffled diagonal of D
  Mat Y;     ///< Householder factor
  Mat Q;     ///< Y D Y
  Mat B;     ///< D^{1/2} Y, so that Q = BᵀB
};

/// D has entries 10^{cond_exponent·(j−1)/(n−1)}, j = 1..n, in random order.
ConstraintFactors gen_constraint(int n, double cond_exponent,
                                 CounterRng& rng);

struct GeneratedInstance {
  QdccProblem problem;
  Vec x0;
  Vec slacks;  ///< g_i(x0) = −slacks_i
};

/// Builds a QDCC instance together with a strictly known feasible point.
/// Each constraint draws from its own stream, so adding constraints does
/// not alter earlier ones.
GeneratedInstance gen_feasible_instance(const GenConfig& cfg);

}  // namespace imba
