#ifndef SPECFLOW_JSON_IO_HPP
#define SPECFLOW_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "specflow/algebra.hpp"
#include "specflow/quad.hpp"
#include "specflow/sflow.hpp"
#include "specflow/ssf.hpp"
#include "specflow/weights.hpp"

namespace specflow {

using Json = nlohmann::ordered_json;

/// Matrix wire format: {"re": [[...]], "im": [[...]]} ("im" may be omitted
/// for real matrices on input).
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// BlockOperator wire format:
/// {"context": [{"dim": n, "weight": w}, ...], "blocks": [matrix, ...]}.
Json operator_to_json(const BlockOperator& a);
BlockOperator operator_from_json(const Json& j);

ContextPtr context_from_json(const Json& j);
Json context_to_json(const TraceContext& ctx);

/// Catalog reference, e.g. {"kind": "gaussian", "eps": 0.5}.  Kinds:
/// gaussian(eps), resolvent_power(p), mollifier(eps[, center]),
/// alpha_eps_h(eps), alpha_eps_f(eps).
WeightFunction weight_from_json(const Json& j);

QuadratureSpec quadrature_from_json(const Json& j);
Json quadrature_to_json(const QuadratureSpec& spec);

Json sf_result_to_json(const SpectralFlowResult& res);

Json profile_to_json(const SsfProfile& profile);

/// One CSV cell with 17 significant digits and "." decimal separator.
std::string format_number(double x);

}  // namespace specflow

#endif
