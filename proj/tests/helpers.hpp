#pragma once

#include <cmath>
#include <functional>

#include "imba/generator.hpp"
#include "imba/problem.hpp"

namespace imba::testing {

inline GeneratedInstance seeded(int n, int m, double cond, std::uint64_t seed,
                                double p_coef = 1e5) {
  GenConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.cond_exponent = cond;
  cfg.seed = seed;
  cfg.p_coef = p_coef;
  return gen_feasible_instance(cfg);
}

inline Vec central_difference(const std::function<double(const Vec&)>& f,
                              const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline double rel_err(const Vec& a, const Vec& ref) {
  return (a - ref).cwiseAbs().maxCoeff() /
         std::max(1.0, ref.cwiseAbs().maxCoeff());
}

/// Two-dimensional quadratic instance with one unit-ball constraint.
inline QdccProblem unit_ball_problem(double c_h0, double c_phi) {
  QdccProblem p;
  p.n = 2;
  p.m = 1;
  QuadraticObjective q;
  q.Y0 = Mat::Zero(0, 2);
  q.b0_unit = Vec::Unit(2, 0);
  q.omega0 = 0.0;
  p.objective = q;
  p.reg = {c_h0, c_phi};
  QuadConstraint c;
  c.B = Mat::Identity(2, 2);
  c.h = Vec::Zero(2);
  c.d_sq = 1.0;
  p.constraints.push_back(c);
  return p;
}

}  // namespace imba::testing
