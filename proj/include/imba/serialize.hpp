#pragma once

#include <json.hpp>
#include <string>

#include "imba/problem.hpp"

namespace imba {

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);
/// Row-major nested arrays.
nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j, Eigen::Index cols_if_empty = 0);

nlohmann::json problem_to_json(const QdccProblem& prob);
/// Throws std::invalid_argument on a malformed document.
QdccProblem problem_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

void write_instance(const std::string& path, const QdccProblem& prob);
QdccProblem read_instance(const std::string& path);

/// A point with optional multipliers; also the sidecar written next to a
/// generated instance (x0 and the slacks).
struct PointFile {
  Vec x;
  Vec lambda;
  Vec v;
  Vec slacks;
};

nlohmann::json point_to_json(const PointFile& p);
/// Accepts "x" or "x0" for the point.
PointFile point_from_json(const nlohmann::json& j);

}  // namespace imba
