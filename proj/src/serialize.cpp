#include "imba/serialize.hpp"

#include <fstream>
#include <sstream>

namespace imba {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const json& j) {
  require(j.is_array(), "json: expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), "json: expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, Eigen::Index cols_if_empty) {
  require(j.is_array(), "json: expected a nested array");
  if (j.empty()) return Mat(0, cols_if_empty);
  const auto rows = static_cast<Eigen::Index>(j.size());
  require(j[0].is_array(), "json: expected a nested array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
            "json: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      require(e.is_number(), "json: expected a number");
      m(r, c) = e.get<double>();
    }
  }
  return m;
}

json problem_to_json(const QdccProblem& prob) {
  json j;
  j["n"] = prob.n;
  j["m"] = prob.m;
  json obj;
  if (const auto* q = std::get_if<QuadraticObjective>(&prob.objective)) {
    obj["variant"] = "quadratic";
    obj["Y0"] = mat_to_json(q->Y0);
    obj["b0_unit"] = vec_to_json(q->b0_unit);
    obj["omega0"] = q->omega0;
  } else {
    const auto& st = std::get<StudentTObjective>(prob.objective);
    obj["variant"] = "student_t";
    obj["A"] = mat_to_json(st.A);
    obj["b"] = vec_to_json(st.b);
  }
  if (prob.lin_shift.size() > 0) obj["lin_shift"] = vec_to_json(prob.lin_shift);
  if (prob.const_shift != 0.0) obj["const_shift"] = prob.const_shift;
  j["objective"] = std::move(obj);
  j["reg"] = {{"c_h0", prob.reg.c_h0}, {"c_phi", prob.reg.c_phi}};
  json cons = json::array();
  for (const auto& c : prob.constraints) {
    json jc;
    jc["B"] = mat_to_json(c.B);
    jc["h"] = vec_to_json(c.h);
    jc["d_sq"] = c.d_sq;
    jc["p_coef"] = c.p_coef;
    if (c.lin.size() > 0) jc["lin"] = vec_to_json(c.lin);
    cons.push_back(std::move(jc));
  }
  j["constraints"] = std::move(cons);
  j["meta"] = {{"seed", prob.meta.seed},
               {"cond_exponent", prob.meta.cond_exponent},
               {"note", prob.meta.note}};
  return j;
}

QdccProblem problem_from_json(const json& j) {
  try {
    QdccProblem prob;
    prob.n = j.at("n").get<int>();
    prob.m = j.at("m").get<int>();
    const json& obj = j.at("objective");
    const std::string variant = obj.at("variant").get<std::string>();
    if (variant == "quadratic") {
      QuadraticObjective q;
      q.Y0 = mat_from_json(obj.at("Y0"), prob.n);
      q.b0_unit = vec_from_json(obj.at("b0_unit"));
      q.omega0 = obj.at("omega0").get<double>();
      prob.objective = std::move(q);
    } else if (variant == "student_t") {
      StudentTObjective st;
      st.A = mat_from_json(obj.at("A"), prob.n);
      st.b = vec_from_json(obj.at("b"));
      prob.objective = std::move(st);
    } else {
      throw std::invalid_argument("instance: unknown objective variant '" +
                                  variant + "'");
    }
    if (obj.contains("lin_shift"))
      prob.lin_shift = vec_from_json(obj.at("lin_shift"));
    prob.const_shift = obj.value("const_shift", 0.0);
    prob.reg.c_h0 = j.at("reg").at("c_h0").get<double>();
    prob.reg.c_phi = j.at("reg").at("c_phi").get<double>();
    for (const json& jc : j.at("constraints")) {
      QuadConstraint c;
      c.B = mat_from_json(jc.at("B"), prob.n);
      c.h = vec_from_json(jc.at("h"));
      c.d_sq = jc.at("d_sq").get<double>();
      c.p_coef = jc.at("p_coef").get<double>();
      if (jc.contains("lin")) c.lin = vec_from_json(jc.at("lin"));
      prob.constraints.push_back(std::move(c));
    }
    if (j.contains("meta")) {
      const json& meta = j.at("meta");
      prob.meta.seed = meta.value("seed", std::uint64_t{0});
      prob.meta.cond_exponent = meta.value("cond_exponent", 0.0);
      prob.meta.note = meta.value("note", std::string());
    }
    prob.validate();
    return prob;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance: ") + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(1) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_instance(const std::string& path, const QdccProblem& prob) {
  write_json_file(path, problem_to_json(prob));
}

QdccProblem read_instance(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

json point_to_json(const PointFile& p) {
  json j;
  j["x"] = vec_to_json(p.x);
  if (p.lambda.size() > 0) j["lambda"] = vec_to_json(p.lambda);
  if (p.v.size() > 0) j["v"] = vec_to_json(p.v);
  if (p.slacks.size() > 0) j["slacks"] = vec_to_json(p.slacks);
  return j;
}

PointFile point_from_json(const json& j) {
  try {
    PointFile p;
    if (j.contains("x")) {
      p.x = vec_from_json(j.at("x"));
    } else {
      p.x = vec_from_json(j.at("x0"));
    }
    if (j.contains("lambda")) p.lambda = vec_from_json(j.at("lambda"));
    if (j.contains("v")) p.v = vec_from_json(j.at("v"));
    if (j.contains("slacks")) p.slacks = vec_from_json(j.at("slacks"));
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("point file: ") + e.what());
  }
}

}  // namespace imba
