#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "certiqp/boxqp.hpp"
#include "certiqp/certificate.hpp"
#include "certiqp/harness.hpp"
#include "certiqp/transforms.hpp"

namespace certiqp {

using Json = nlohmann::json;

/// Parses text as JSON; throws kParse with the parser's message.
Json parse_json(const std::string& text);

/// Reads and parses a file; throws kParse when unreadable or malformed.
Json read_json_file(const std::string& path);

/// {"H": [[...]], "h": [...]} with optional "l" and "u" for a general box.
struct BoxQpInput {
  BoxQP problem;
  std::optional<Vector> lower, upper;
};

BoxQpInput boxqp_from_json(const Json& j);
StrictQP strict_qp_from_json(const Json& j);
LassoProblem lasso_from_json(const Json& j);

/// {"y": [...], "rho": r} plus either "gram" or "X" with an optional
/// "kernel": "linear" | {"type": "rbf", "sigma": s}.
struct SvmInput {
  SvmProblem problem;
  std::optional<Matrix> features;
  Kernel kernel;
};

SvmInput svm_from_json(const Json& j);

Json to_json(const Certificate& c);
Json to_json(const Solution& s);
Json to_json(const AuditReport& r);

Matrix matrix_from_json(const Json& j, const char* field);
Vector vector_from_json(const Json& j, const char* field);

}  // namespace certiqp
