#include "certiqp/io.hpp"

#include <fstream>
#include <sstream>
#include <type_traits>

#include "certiqp/error.hpp"

namespace certiqp {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::kParse, msg); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) parse_error("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) parse_error(std::string("missing field \"") + name + "\"");
  return *it;
}

double number(const Json& v, const char* name) {
  if (!v.is_number()) parse_error(std::string("field \"") + name + "\" must hold numbers");
  return v.get<double>();
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Vector vector_from_json(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) parse_error(std::string("field \"") + name + "\" must be an array");
  Vector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number(x, name));
  return out;
}

Matrix matrix_from_json(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) parse_error(std::string("field \"") + name + "\" must be an array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!v[0].is_array()) parse_error(std::string("field \"") + name + "\" must be an array of rows");
    cols = v[0].size();
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      parse_error(std::string("field \"") + name + "\" has ragged rows");
    }
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = number(v[i][k], name);
  }
  return m;
}

BoxQpInput boxqp_from_json(const Json& j) {
  BoxQpInput in;
  in.problem.H = matrix_from_json(j, "H");
  in.problem.h = vector_from_json(j, "h");
  const bool has_l = j.contains("l");
  const bool has_u = j.contains("u");
  if (has_l != has_u) parse_error("\"l\" and \"u\" must be given together");
  if (has_l) {
    in.lower = vector_from_json(j, "l");
    in.upper = vector_from_json(j, "u");
  }
  return in;
}

StrictQP strict_qp_from_json(const Json& j) {
  StrictQP p;
  p.Q = matrix_from_json(j, "Q");
  p.q = vector_from_json(j, "q");
  p.G = matrix_from_json(j, "G");
  p.g = vector_from_json(j, "g");
  if (j.contains("rho") && j["rho"].is_number()) {
    p.rho.assign(p.g.size(), j["rho"].get<double>());
  } else {
    p.rho = vector_from_json(j, "rho");
  }
  if (p.G.rows() == 0) p.G = Matrix(0, p.q.size());
  return p;
}

LassoProblem lasso_from_json(const Json& j) {
  LassoProblem p;
  p.A = matrix_from_json(j, "A");
  p.b = vector_from_json(j, "b");
  p.weight = number(field(j, "lambda"), "lambda");
  return p;
}

SvmInput svm_from_json(const Json& j) {
  SvmInput in;
  in.problem.labels = vector_from_json(j, "y");
  in.problem.rho = number(field(j, "rho"), "rho");
  if (j.contains("kernel")) {
    const Json& k = j["kernel"];
    const std::string type = k.is_string() ? k.get<std::string>()
                             : k.is_object() && k.contains("type") && k["type"].is_string()
                                 ? k["type"].get<std::string>()
                                 : "";
    if (type == "linear") {
      in.kernel.kind = KernelKind::kLinear;
    } else if (type == "rbf") {
      in.kernel.kind = KernelKind::kRbf;
      if (k.is_object() && k.contains("sigma")) in.kernel.sigma = number(k["sigma"], "sigma");
      if (!(in.kernel.sigma > 0.0)) parse_error("kernel sigma must be positive");
    } else {
      parse_error("kernel must be \"linear\" or {\"type\": \"rbf\", \"sigma\": s}");
    }
  }
  if (j.contains("gram")) {
    in.problem.gram = matrix_from_json(j, "gram");
  } else {
    in.features = matrix_from_json(j, "X");
    if (in.features->rows() != in.problem.labels.size()) {
      throw Error(ErrorKind::kDimensionMismatch, "one row of X per label");
    }
    in.problem.gram = augmented_gram(*in.features, in.kernel);
  }
  return in;
}

Json to_json(const Certificate& c) {
  Json j;
  j["n"] = c.n;
  j["epsilon"] = c.epsilon;
  j["algorithm"] = std::string(to_string(c.algorithm));
  j["n_iter"] = c.n_iter;
  j["n_rank1_bound"] = c.n_rank1_bound;
  j["flop_estimate"] = c.flop_estimate;
  std::visit(
      [&](const auto& k) {
        Json cj;
        cj["alpha"] = k.alpha;
        cj["sigma"] = k.sigma;
        cj["beta"] = k.beta;
        cj["mu"] = k.mu;
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, Alg2Constants>) {
          cj["delta"] = k.delta;
          cj["eta"] = k.eta;
        }
        j["constants"] = cj;
      },
      c.constants);
  return j;
}

Json to_json(const Solution& s) {
  Json j;
  j["z"] = s.z_star;
  j["duality_gap"] = s.duality_gap;
  j["iterations"] = s.iterations_run;
  j["n_iter_certified"] = s.n_iter_certified;
  j["rank1_updates"] = s.rank1_used;
  return j;
}

Json to_json(const AuditReport& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["clean"] = r.clean();
  j["rank1_bound"] = r.rank1_bound;
  for (const auto* rec : r.records()) {
    j["invariants"][rec->name] = {{"failures", rec->failures}, {"worst_ratio", rec->worst_ratio}};
  }
  return j;
}

}  // namespace certiqp
