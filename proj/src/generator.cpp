#include "imba/generator.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace imba {

void GenConfig::validate() const {
  require(n >= 2, "generator: n must be at least 2");
  require(m >= 1, "generator: m must be at least 1");
  require(cond_exponent >= 0.0, "generator: cond_exponent must be >= 0");
  require(p_coef >= 0.0, "generator: p_coef must be >= 0");
  if (const auto* st = std::get_if<StudentTKind>(&objective_kind)) {
    require(st->N >= 1, "generator: Student-t objective needs N >= 1");
  }
}

Mat gen_householder(int n, CounterRng& rng) {
  require(n >= 1, "gen_householder: n must be positive");
  Vec y(n);
  double ny2 = 0.0;
  do {
    for (int i = 0; i < n; ++i) y(i) = rng.uniform_open(-1.0, 1.0);
    ny2 = y.squaredNorm();
  } while (ny2 == 0.0);
  // Entry by entry so that Y is exactly symmetric.
  const double c = 2.0 / ny2;
  Mat Y(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) Y(i, j) = (i == j ? 1.0 : 0.0) - c * (y(i) * y(j));
  return Y;
}

ConstraintFactors gen_constraint(int n, double cond_exponent,
                                 CounterRng& rng) {
  require(n >= 2, "gen_constraint: n must be at least 2");
  std::vector<double> entries(n);
  for (int j = 0; j < n; ++j) {
    entries[j] = std::pow(10.0, cond_exponent * j / (n - 1));
  }
  rng.shuffle(entries.begin(), entries.end());

  ConstraintFactors f;
  f.diag = Eigen::Map<const Vec>(entries.data(), n);
  f.Y = gen_householder(n, rng);
  f.B = f.diag.cwiseSqrt().asDiagonal() * f.Y;
  f.Q = f.Y * f.diag.asDiagonal() * f.Y;
  return f;
}

namespace {

QuadraticObjective make_quadratic(int n, double omega0, CounterRng& rng) {
  QuadraticObjective obj;
  const int p = n / 2;
  obj.Y0.resize(p, n);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < n; ++c) obj.Y0(r, c) = rng.normal();
  Vec b0(n);
  do {
    for (int i = 0; i < n; ++i) b0(i) = rng.normal();
  } while (b0.norm() == 0.0);
  obj.b0_unit = b0 / b0.norm();
  obj.omega0 = omega0;
  return obj;
}

// Heavy-tailed regression data: A ~ N(0,1), b = A·x_true + 0.1·t(4) noise.
StudentTObjective make_studentt(int n, int N, CounterRng& rng) {
  StudentTObjective obj;
  obj.A.resize(N, n);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < n; ++c) obj.A(r, c) = rng.normal();
  Vec x_true(n);
  for (int i = 0; i < n; ++i) x_true(i) = rng.normal();
  obj.b = obj.A * x_true;
  for (int r = 0; r < N; ++r) obj.b(r) += 0.1 * rng.student_t(4);
  return obj;
}

}  // namespace

GeneratedInstance gen_feasible_instance(const GenConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;

  GeneratedInstance out;
  QdccProblem& prob = out.problem;
  prob.n = n;
  prob.m = cfg.m;
  prob.reg = cfg.reg;
  prob.meta.seed = cfg.seed;
  prob.meta.cond_exponent = cfg.cond_exponent;

  CounterRng obj_rng(cfg.seed, streams::kObjective);
  if (const auto* q = std::get_if<QuadraticKind>(&cfg.objective_kind)) {
    prob.objective = make_quadratic(n, q->omega0, obj_rng);
    prob.meta.note = "quadratic";
  } else {
    const auto& st = std::get<StudentTKind>(cfg.objective_kind);
    prob.objective = make_studentt(n, st.N, obj_rng);
    prob.meta.note =
        "student-t; A,x_true ~ N(0,1), noise 0.1*t(4) (approximate protocol)";
  }

  CounterRng x_rng(cfg.seed, streams::kStartPoint);
  out.x0.resize(n);
  for (int i = 0; i < n; ++i) out.x0(i) = x_rng.normal();

  out.slacks.resize(cfg.m);
  prob.constraints.reserve(cfg.m);
  for (int i = 0; i < cfg.m; ++i) {
    CounterRng rng(cfg.seed, streams::kConstraintBase + i);
    ConstraintFactors f = gen_constraint(n, cfg.cond_exponent, rng);
    QuadConstraint c;
    c.B = std::move(f.B);
    c.h.resize(n);
    for (int j = 0; j < n; ++j) c.h(j) = rng.uniform_open(-1.0, 1.0);
    const double s = rng.uniform(0.0, 1.0);
    c.p_coef = cfg.p_coef;
    c.d_sq = (c.B * out.x0 + c.h).squaredNorm() -
             cfg.p_coef * out.x0.squaredNorm() + s;
    out.slacks(i) = s;
    prob.constraints.push_back(std::move(c));
  }
  prob.validate();
  return out;
}

}  // namespace imba
