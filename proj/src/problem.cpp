#include "imba/problem.hpp"

#include <algorithm>
#include <cmath>

namespace imba {
namespace {

void require_finite(const Vec& x, const char* what) {
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

void require_dim(const QdccProblem& prob, const Vec& x, const char* what) {
  if (x.size() != prob.n) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(prob.n) + ", got " +
                                std::to_string(x.size()));
  }
  require_finite(x, what);
}

double shift_value(const QdccProblem& prob, const Vec& x) {
  double s = prob.const_shift;
  if (prob.lin_shift.size() == x.size()) s += prob.lin_shift.dot(x);
  return s;
}

}  // namespace

double QuadConstraint::value(const Vec& x) const {
  return convex_part(x) - p_coef * x.squaredNorm();
}

Vec QuadConstraint::gradient(const Vec& x) const {
  return convex_part_gradient(x) - 2.0 * p_coef * x;
}

double QuadConstraint::value_expanded(const Vec& x) const {
  const Vec qx = B.transpose() * (B * x);
  return x.dot(qx) - p_coef * x.squaredNorm() + 2.0 * b_lin().dot(x) +
         c_const();
}

double QuadConstraint::convex_part(const Vec& x) const {
  double v = (B * x + h).squaredNorm() - d_sq;
  if (lin.size() == x.size()) v += lin.dot(x);
  return v;
}

Vec QuadConstraint::convex_part_gradient(const Vec& x) const {
  Vec g = 2.0 * (B.transpose() * (B * x + h));
  if (lin.size() == x.size()) g += lin;
  return g;
}

void QdccProblem::validate() const {
  require(n >= 1, "problem: n must be positive");
  require(m >= 1, "problem: m must be positive");
  require(static_cast<int>(constraints.size()) == m,
          "problem: constraint count does not match m");
  require(reg.c_h0 >= 0.0 && reg.c_phi >= 0.0,
          "problem: regularizer coefficients must be nonnegative");
  require(lin_shift.size() == 0 || lin_shift.size() == n,
          "problem: lin_shift has wrong dimension");
  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          require(obj.Y0.cols() == n || obj.Y0.rows() == 0,
                  "problem: Y0 has wrong column count");
          require(obj.b0_unit.size() == n, "problem: b0 has wrong dimension");
          require(std::abs(obj.b0_unit.norm() - 1.0) <= 1e-12,
                  "problem: b0_unit must have unit norm");
        } else {
          require(obj.A.rows() >= 1, "problem: Student-t needs N >= 1");
          require(obj.A.cols() == n, "problem: A has wrong column count");
          require(obj.b.size() == obj.A.rows(),
                  "problem: b has wrong dimension");
        }
      },
      objective);
  for (const auto& c : constraints) {
    require(c.B.rows() == n && c.B.cols() == n,
            "problem: constraint B must be n x n");
    require(c.h.size() == n, "problem: constraint h has wrong dimension");
    require(c.p_coef >= 0.0, "problem: p_coef must be nonnegative");
    require(c.lin.size() == 0 || c.lin.size() == n,
            "problem: constraint lin has wrong dimension");
  }
}

double eval_f0(const QdccProblem& prob, const Vec& x) {
  require_dim(prob, x, "eval_f0");
  const double base = std::visit(
      [&](const auto& obj) -> double {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          const double quad =
              obj.Y0.rows() == 0 ? 0.0 : (obj.Y0 * x).squaredNorm();
          return quad + 2.0 * obj.omega0 * obj.b0_unit.dot(x);
        } else {
          const Vec u = obj.A * x - obj.b;
          return (1.0 + 4.0 * u.array().square()).log().sum();
        }
      },
      prob.objective);
  return base + shift_value(prob, x);
}

Vec grad_f0(const QdccProblem& prob, const Vec& x) {
  require_dim(prob, x, "grad_f0");
  Vec g = std::visit(
      [&](const auto& obj) -> Vec {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          Vec out = 2.0 * obj.omega0 * obj.b0_unit;
          if (obj.Y0.rows() > 0) out += 2.0 * (obj.Y0.transpose() * (obj.Y0 * x));
          return out;
        } else {
          const Vec u = obj.A * x - obj.b;
          const Vec dtheta =
              (8.0 * u.array() / (1.0 + 4.0 * u.array().square())).matrix();
          return obj.A.transpose() * dtheta;
        }
      },
      prob.objective);
  if (prob.lin_shift.size() == prob.n) g += prob.lin_shift;
  return g;
}

double eval_h0(const QdccProblem& prob, const Vec& x) {
  return prob.reg.c_h0 * x.norm();
}

double eval_g0(const QdccProblem& prob, const Vec& x) {
  return eval_f0(prob, x) - eval_h0(prob, x);
}

double eval_phi(const QdccProblem& prob, const Vec& x) {
  return prob.reg.c_phi * x.lpNorm<1>();
}

double eval_F(const QdccProblem& prob, const Vec& x) {
  return eval_g0(prob, x) + eval_phi(prob, x);
}

Vec subgrad_g0(const QdccProblem& prob, const Vec& x) {
  Vec xi = grad_f0(prob, x);
  if (prob.reg.c_h0 == 0.0) return xi;
  const double nx = x.norm();
  if (nx > 0.0) {
    xi -= (prob.reg.c_h0 / nx) * x;
  } else {
    xi(0) -= prob.reg.c_h0;
  }
  return xi;
}

Vec studentt_curvature(const QdccProblem& prob, const Vec& x) {
  require_dim(prob, x, "studentt_curvature");
  if (const auto* st = std::get_if<StudentTObjective>(&prob.objective)) {
    const Vec u = st->A * x - st->b;
    const auto u2 = u.array().square();
    return ((8.0 - 32.0 * u2) / (1.0 + 4.0 * u2).square()).matrix();
  }
  return Vec();
}

Vec eval_g(const QdccProblem& prob, const Vec& x) {
  require_dim(prob, x, "eval_g");
  Vec g(prob.m);
  for (int i = 0; i < prob.m; ++i) g(i) = prob.constraints[i].value(x);
  return g;
}

Mat jac_g(const QdccProblem& prob, const Vec& x) {
  require_dim(prob, x, "jac_g");
  Mat V(prob.n, prob.m);
  for (int i = 0; i < prob.m; ++i) V.col(i) = prob.constraints[i].gradient(x);
  return V;
}

double feasibility_violation(const QdccProblem& prob, const Vec& x) {
  return positive_part_inf_norm(eval_g(prob, x));
}

KktResidual kkt_residual(const QdccProblem& prob, const Vec& x, const Vec& v,
                         const Vec& lambda) {
  require(lambda.size() == prob.m, "kkt_residual: lambda has wrong dimension");
  require(v.size() == prob.n, "kkt_residual: v has wrong dimension");
  require(lambda.size() == 0 || lambda.minCoeff() >= 0.0,
          "kkt_residual: lambda must be nonnegative");
  const Vec g = eval_g(prob, x);
  const Vec xi = subgrad_g0(prob, x);
  const Mat V = jac_g(prob, x);
  KktResidual r;
  r.stationarity = (xi + v + V * lambda).norm();
  r.complementarity = positive_part(-lambda.dot(g));
  r.feasibility = positive_part_inf_norm(g);
  return r;
}

Vec best_phi_subgradient(const QdccProblem& prob, const Vec& x,
                         const Vec& lambda, double zero_tol) {
  const double c = prob.reg.c_phi;
  const Vec target = -(subgrad_g0(prob, x) + jac_g(prob, x) * lambda);
  Vec v(prob.n);
  for (int j = 0; j < prob.n; ++j) {
    if (std::abs(x(j)) <= zero_tol) {
      v(j) = std::clamp(target(j), -c, c);
    } else {
      v(j) = x(j) > 0.0 ? c : -c;
    }
  }
  return v;
}

}  // namespace imba
