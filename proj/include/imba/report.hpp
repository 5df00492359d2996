#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "imba/driver.hpp"

namespace imba {

/// Shortest-safe round-trip text for a double: 17 significant digits,
/// "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double x);

std::string history_header();
/// One CSV line without the newline. wall_time is written as 0 when
/// `omit_timing` is set, so that repeated runs compare byte for byte.
std::string history_row(const IterateRecord& rec, bool omit_timing);

/// Streams the history CSV; each row is flushed as soon as it is written.
class HistoryWriter {
 public:
  HistoryWriter(std::ostream& out, bool omit_timing);
  void write(const IterateRecord& rec);

 private:
  std::ostream& out_;
  bool omit_timing_;
};

/// {status, iters, Fval, time_s, compl, F_initial, feas, message}.
nlohmann::json summary_json(const SolveReport& report, bool omit_timing);

struct ComparisonRow {
  std::string solver;
  std::string status;
  int iter = 0;
  double Fval = 0.0;
  double time_s = 0.0;
  double compl_ = 0.0;
  double feas = 0.0;
  double stationarity = 0.0;
};

ComparisonRow comparison_row(const std::string& solver,
                             const QdccProblem& prob,
                             const SolveReport& report);

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           bool omit_timing);
nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows,
                               bool omit_timing);

}  // namespace imba
