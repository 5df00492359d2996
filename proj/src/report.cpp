#include "imba/report.hpp"

#include <fmt/format.h>

#include <cmath>

namespace imba {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string history_header() {
  return "k,F,step_norm,inner_steps,mu_k,L_k_max,compl,feas,phi_potential,"
         "pg_iters,wall_time";
}

std::string history_row(const IterateRecord& rec, bool omit_timing) {
  const std::string phi = rec.phi_potential.is_finite()
                              ? format_double(rec.phi_potential.value)
                              : std::string("inf");
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", rec.k,
                     format_double(rec.F), format_double(rec.step_norm),
                     rec.inner_steps, format_double(rec.mu_k),
                     format_double(rec.L_k_max), format_double(rec.compl_),
                     format_double(rec.feas), phi, rec.pg_iters,
                     format_double(omit_timing ? 0.0 : rec.wall_time));
}

HistoryWriter::HistoryWriter(std::ostream& out, bool omit_timing)
    : out_(out), omit_timing_(omit_timing) {
  out_ << history_header() << '\n';
  out_.flush();
}

void HistoryWriter::write(const IterateRecord& rec) {
  out_ << history_row(rec, omit_timing_) << '\n';
  out_.flush();
}

nlohmann::json summary_json(const SolveReport& report, bool omit_timing) {
  nlohmann::json j;
  j["status"] = to_string(report.status);
  j["iters"] = report.iterations();
  j["Fval"] = report.F_final();
  j["F_initial"] = report.F_initial;
  j["time_s"] = omit_timing ? 0.0 : report.total_time;
  j["compl"] = report.records.empty() ? 0.0 : report.records.back().compl_;
  j["feas"] = report.records.empty() ? 0.0 : report.records.back().feas;
  if (!report.message.empty()) j["message"] = report.message;
  return j;
}

ComparisonRow comparison_row(const std::string& solver,
                             const QdccProblem& prob,
                             const SolveReport& report) {
  ComparisonRow row;
  row.solver = solver;
  row.status = to_string(report.status);
  row.iter = report.iterations();
  row.Fval = report.F_final();
  row.time_s = report.total_time;
  const Vec g = eval_g(prob, report.x_final);
  row.compl_ = positive_part(-report.lambda_final.dot(g));
  row.feas = positive_part_inf_norm(g);
  const Vec v = best_phi_subgradient(prob, report.x_final,
                                     report.lambda_final);
  row.stationarity =
      kkt_residual(prob, report.x_final, v, report.lambda_final).stationarity;
  return row;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           bool omit_timing) {
  std::string out = "solver,status,iter,Fval,time,compl,feas,stationarity\n";
  for (const ComparisonRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.solver, r.status, r.iter,
                       format_double(r.Fval),
                       format_double(omit_timing ? 0.0 : r.time_s),
                       format_double(r.compl_), format_double(r.feas),
                       format_double(r.stationarity));
  }
  return out;
}

nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows,
                               bool omit_timing) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ComparisonRow& r : rows) {
    arr.push_back({{"solver", r.solver},
                   {"status", r.status},
                   {"iter", r.iter},
                   {"Fval", r.Fval},
                   {"time_s", omit_timing ? 0.0 : r.time_s},
                   {"compl", r.compl_},
                   {"feas", r.feas},
                   {"stationarity", r.stationarity}});
  }
  return arr;
}

}  // namespace imba
