// Command-line front end: generate, solve, dca, compare, check, selftest.
//
// Exit codes: 0 converged (StepTol/ComplTol) or command succeeded,
// 1 usage/input error, 2 IterLimit, 3 SubproblemFailure, 4 selftest failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "imba/dca.hpp"
#include "imba/generator.hpp"
#include "imba/report.hpp"
#include "imba/selftest.hpp"
#include "imba/serialize.hpp"

namespace fs = std::filesystem;
using namespace imba;

namespace {

struct CliOptions {
  std::string instance;
  std::string start;
  std::string point;
  std::string out = ".";
  std::uint64_t seed = 1;
  int n = 50;
  int m = 10;
  double cond_exp = 4.0;
  std::string objective = "quad";
  double omega0 = 10.0;
  int N = 0;
  double p_coef = 1e5;
  std::optional<double> eps;
  std::optional<double> eps_compl;
  std::optional<int> kmax;
  std::optional<double> beta_c;
  bool paper_profile = false;
  bool omit_timing = false;
};

void add_generation_flags(CLI::App* app, CliOptions& o) {
  app->add_option("--seed", o.seed, "instance seed");
  app->add_option("--n", o.n, "dimension")->check(CLI::PositiveNumber);
  app->add_option("--m", o.m, "number of constraints")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--cond-exp", o.cond_exp, "log10 of the constraint condition number")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--objective", o.objective, "objective family")
      ->check(CLI::IsMember({"quad", "student"}));
  app->add_option("--omega0", o.omega0, "linear-term weight (quad)");
  app->add_option("--N", o.N, "observations (student); default 2n");
  app->add_option("--p-coef", o.p_coef, "concave constraint weight (P_i = p·I)")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--paper-profile", o.paper_profile,
                "reference settings: cond-exp 10, p-coef 1e5, default tolerances");
}

void add_solver_flags(CLI::App* app, CliOptions& o) {
  app->add_option("--instance", o.instance, "instance JSON");
  app->add_option("--start", o.start,
                  "start point JSON (default: start.json beside the instance)");
  app->add_option("--eps", o.eps, "step tolerance");
  app->add_option("--eps-compl", o.eps_compl, "complementarity tolerance");
  app->add_option("--kmax", o.kmax, "outer iteration limit");
  app->add_option("--beta-c", o.beta_c,
                  "constraint-residual weight of the inexactness test (moving-balls solver)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "output directory");
  app->add_flag("--omit-timing", o.omit_timing,
                "write zero timings so outputs compare byte for byte");
  add_generation_flags(app, o);
}

GenConfig gen_config(const CliOptions& o) {
  GenConfig cfg;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.seed = o.seed;
  cfg.cond_exponent = o.paper_profile ? 10.0 : o.cond_exp;
  cfg.p_coef = o.paper_profile ? 1e5 : o.p_coef;
  if (o.objective == "quad") {
    cfg.objective_kind = QuadraticKind{o.omega0};
  } else {
    cfg.objective_kind = StudentTKind{o.N > 0 ? o.N : 2 * o.n};
  }
  return cfg;
}

struct LoadedProblem {
  QdccProblem prob;
  Vec x0;
};

LoadedProblem load_or_generate(const CliOptions& o) {
  LoadedProblem lp;
  if (!o.instance.empty()) {
    lp.prob = read_instance(o.instance);
    std::string start = o.start;
    if (start.empty())
      start = (fs::path(o.instance).parent_path() / "start.json").string();
    lp.x0 = point_from_json(read_json_file(start)).x;
    require(lp.x0.size() == lp.prob.n, "start point has wrong dimension");
  } else {
    GeneratedInstance gi = gen_feasible_instance(gen_config(o));
    lp.prob = std::move(gi.problem);
    lp.x0 = std::move(gi.x0);
  }
  return lp;
}

SolverParams solver_params(const CliOptions& o) {
  SolverParams p;
  if (o.eps) p.eps_step = *o.eps;
  if (o.eps_compl) p.eps_compl = *o.eps_compl;
  if (o.kmax) p.k_max = *o.kmax;
  if (o.beta_c) p.beta_C = *o.beta_c;
  return p;
}

DcaParams dca_params(const CliOptions& o) {
  DcaParams p;
  if (o.eps) p.eps_step = *o.eps;
  if (o.kmax) p.k_max = *o.kmax;
  return p;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::StepTol:
    case SolveStatus::ComplTol:
      return 0;
    case SolveStatus::IterLimit:
      return 2;
    case SolveStatus::SubproblemFailure:
      return 3;
  }
  return 1;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open " + p.string());
  return f;
}

template <typename Run>
SolveReport run_with_history(const fs::path& csv, bool omit_timing, Run run) {
  std::ofstream f = open_out(csv);
  HistoryWriter writer(f, omit_timing);
  return run([&](const IterateRecord& r) { writer.write(r); });
}

void write_point(const fs::path& p, const SolveReport& rep) {
  write_json_file(p.string(),
                  point_to_json({rep.x_final, rep.lambda_final, rep.v_final, {}}));
}

int cmd_generate(const CliOptions& o) {
  const GeneratedInstance gi = gen_feasible_instance(gen_config(o));
  fs::create_directories(o.out);
  write_instance((fs::path(o.out) / "instance.json").string(), gi.problem);
  write_json_file((fs::path(o.out) / "start.json").string(),
                  point_to_json({gi.x0, {}, {}, gi.slacks}));
  return 0;
}

int cmd_solve(const CliOptions& o, bool dca) {
  const LoadedProblem lp = load_or_generate(o);
  fs::create_directories(o.out);
  const fs::path out(o.out);
  if (o.instance.empty()) write_instance((out / "instance.json").string(), lp.prob);
  const SolveReport rep = run_with_history(
      out / "history.csv", o.omit_timing, [&](const IterationObserver& obs) {
        return dca ? dca_solve(lp.prob, lp.x0, dca_params(o), obs)
                   : solve(lp.prob, lp.x0, solver_params(o), obs);
      });
  const nlohmann::json summary = summary_json(rep, o.omit_timing);
  write_json_file((out / "summary.json").string(), summary);
  write_point(out / "point.json", rep);
  std::cout << summary.dump() << '\n';
  return exit_code(rep.status);
}

int cmd_compare(const CliOptions& o) {
  const LoadedProblem lp = load_or_generate(o);
  fs::create_directories(o.out);
  const fs::path out(o.out);
  const SolveReport a = run_with_history(
      out / "history_imba.csv", o.omit_timing, [&](const IterationObserver& obs) {
        return solve(lp.prob, lp.x0, solver_params(o), obs);
      });
  const SolveReport b = run_with_history(
      out / "history_dca.csv", o.omit_timing, [&](const IterationObserver& obs) {
        return dca_solve(lp.prob, lp.x0, dca_params(o), obs);
      });
  const std::vector<ComparisonRow> rows = {comparison_row("iMBA", lp.prob, a),
                                           comparison_row("DCA", lp.prob, b)};
  open_out(out / "comparison.csv") << comparison_csv(rows, o.omit_timing);
  const nlohmann::json j = comparison_json(rows, o.omit_timing);
  write_json_file((out / "comparison.json").string(), j);
  std::cout << comparison_csv(rows, o.omit_timing);
  return std::max(exit_code(a.status), exit_code(b.status));
}

int cmd_check(const CliOptions& o) {
  require(!o.instance.empty(), "check: --instance is required");
  require(!o.point.empty(), "check: --point is required");
  const QdccProblem prob = read_instance(o.instance);
  const PointFile pf = point_from_json(read_json_file(o.point));
  require(pf.x.size() == prob.n, "check: point has wrong dimension");
  const Vec lambda = pf.lambda.size() > 0 ? pf.lambda : Vec::Zero(prob.m);
  require(lambda.size() == prob.m, "check: lambda has wrong dimension");
  const Vec v = pf.v.size() > 0 ? pf.v : best_phi_subgradient(prob, pf.x, lambda);
  require(v.size() == prob.n, "check: v has wrong dimension");
  const KktResidual r = kkt_residual(prob, pf.x, v, lambda);
  nlohmann::json j = {{"stationarity", r.stationarity},
                      {"complementarity", r.complementarity},
                      {"feasibility", r.feasibility},
                      {"feasibility_violation", feasibility_violation(prob, pf.x)},
                      {"F", eval_F(prob, pf.x)}};
  std::cout << j.dump(1) << '\n';
  return 0;
}

int cmd_selftest(const SelftestOptions& opt) {
  bool all = true;
  for (const SuiteResult& r : run_selftest(opt)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst="
              << format_double(r.worst) << " tol=" << format_double(r.tolerance)
              << " cases=" << r.cases;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact moving-balls solver for DC-constrained problems"};
  app.require_subcommand(1);
  CliOptions o;
  SelftestOptions st;

  CLI::App* gen = app.add_subcommand("generate", "write a seeded instance");
  add_generation_flags(gen, o);
  gen->add_option("--out", o.out, "output directory");
  CLI::App* sol = app.add_subcommand("solve", "run the moving-balls solver");
  add_solver_flags(sol, o);
  CLI::App* dca = app.add_subcommand("dca", "run the DCA baseline");
  add_solver_flags(dca, o);
  CLI::App* cmp = app.add_subcommand("compare", "run both solvers from x0");
  add_solver_flags(cmp, o);
  CLI::App* chk = app.add_subcommand("check", "KKT residual of a point");
  chk->add_option("--instance", o.instance, "instance JSON")->required();
  chk->add_option("--point", o.point, "point JSON {x, lambda?, v?}")->required();
  CLI::App* self = app.add_subcommand("selftest", "built-in numerical checks");
  self->add_option("--seed", st.seed, "seed for the check data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*sol) return cmd_solve(o, false);
    if (*dca) return cmd_solve(o, true);
    if (*cmp) return cmd_compare(o);
    if (*chk) return cmd_check(o);
    if (*self) return cmd_selftest(st);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
