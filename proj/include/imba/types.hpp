#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace imba {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when an iteration produces a non-finite value or a line search
/// fails to terminate.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real number or +infinity. Infinity is carried by the flag; `value` is
/// meaningless when `infinite` is set.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal finite(double v) { return {v, false}; }
  static ExtendedReal plus_infinity() { return {0.0, true}; }

  bool is_finite() const { return !infinite; }
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// max(0, max_i v_i): the sup-norm of the positive part.
template <typename Derived>
typename Derived::Scalar positive_part_inf_norm(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) return Scalar(0);
  return std::max(Scalar(0), v.maxCoeff());
}

template <typename Scalar>
Scalar positive_part(Scalar t) {
  return t > Scalar(0) ? t : Scalar(0);
}

/// Spectral norm of `m` by power iteration on mᵀm from a fixed start vector.
template <typename Derived>
typename Derived::Scalar spectral_norm_estimate(
    const Eigen::MatrixBase<Derived>& m, int iterations) {
  using Scalar = typename Derived::Scalar;
  using VecS = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (m.rows() == 0 || m.cols() == 0) return Scalar(0);
  VecS v = VecS::Ones(m.cols()) / std::sqrt(Scalar(m.cols()));
  Scalar sigma = Scalar(0);
  for (int it = 0; it < iterations; ++it) {
    VecS mv = m * v;
    VecS w = m.transpose() * mv;
    const Scalar nw = w.norm();
    sigma = mv.norm();
    if (nw == Scalar(0)) break;
    v = w / nw;
  }
  return sigma;
}

}  // namespace imba
