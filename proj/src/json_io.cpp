#include "specflow/json_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace specflow {

Json matrix_to_json(const Matrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rrow = Json::array();
        Json irow = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.contains("re")) throw std::invalid_argument("matrix: missing \"re\"");
    const auto& re = j.at("re");
    const auto rows = re.size();
    const auto cols = rows > 0 ? re.at(0).size() : 0;
    Matrix m(rows, cols);
    const bool has_im = j.contains("im");
    for (size_t i = 0; i < rows; ++i) {
        if (re.at(i).size() != cols) throw std::invalid_argument("matrix: ragged \"re\" rows");
        for (size_t k = 0; k < cols; ++k) {
            const double r = re.at(i).at(k).get<double>();
            const double v = has_im ? j.at("im").at(i).at(k).get<double>() : 0.0;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = Complex(r, v);
        }
    }
    return m;
}

Json context_to_json(const TraceContext& ctx) {
    Json arr = Json::array();
    for (const auto& b : ctx.blocks()) {
        arr.push_back(Json{{"dim", b.dim}, {"weight", b.weight}});
    }
    return arr;
}

ContextPtr context_from_json(const Json& j) {
    std::vector<TraceBlock> blocks;
    for (const auto& b : j) {
        blocks.push_back({b.at("dim").get<Eigen::Index>(), b.at("weight").get<double>()});
    }
    return make_context(std::move(blocks));
}

Json operator_to_json(const BlockOperator& a) {
    Json blocks = Json::array();
    for (int k = 0; k < a.block_count(); ++k) blocks.push_back(matrix_to_json(a.block(k)));
    return Json{{"context", context_to_json(*a.context())}, {"blocks", std::move(blocks)}};
}

BlockOperator operator_from_json(const Json& j) {
    const ContextPtr ctx = context_from_json(j.at("context"));
    std::vector<Matrix> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back(matrix_from_json(b));
    return BlockOperator(ctx, std::move(blocks));
}

WeightFunction weight_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return gaussian(j.at("eps").get<double>());
    if (kind == "resolvent_power") return resolvent_power(j.at("p").get<double>());
    if (kind == "mollifier") {
        const double center = j.contains("center") ? j.at("center").get<double>() : 0.0;
        return mollifier(j.at("eps").get<double>(), center);
    }
    if (kind == "alpha_eps_h") return alpha_eps_profiles(j.at("eps").get<double>()).h;
    if (kind == "alpha_eps_f") return alpha_eps_profiles(j.at("eps").get<double>()).f;
    throw std::invalid_argument("weight_from_json: unknown kind \"" + kind + "\"");
}

QuadratureSpec quadrature_from_json(const Json& j) {
    QuadratureSpec spec;
    if (j.contains("order")) spec.order = j.at("order").get<int>();
    if (j.contains("tolerance")) spec.tolerance = j.at("tolerance").get<double>();
    if (j.contains("max_subdivisions")) spec.max_subdivisions = j.at("max_subdivisions").get<int>();
    if (j.contains("crossing_aware")) spec.crossing_aware = j.at("crossing_aware").get<bool>();
    if (j.contains("initial_panels")) spec.initial_panels = j.at("initial_panels").get<int>();
    return spec;
}

Json quadrature_to_json(const QuadratureSpec& spec) {
    return Json{{"order", spec.order},
                {"tolerance", spec.tolerance},
                {"max_subdivisions", spec.max_subdivisions},
                {"crossing_aware", spec.crossing_aware},
                {"initial_panels", spec.initial_panels}};
}

Json sf_result_to_json(const SpectralFlowResult& res) {
    const auto& d = res.diagnostics;
    return Json{{"value", res.value},
                {"method", to_string(res.method)},
                {"diagnostics",
                 Json{{"xi", d.xi},
                      {"ker_h0", d.ker_h0},
                      {"ker_h1", d.ker_h1},
                      {"eta0", d.eta0},
                      {"eta1", d.eta1},
                      {"integral_term", d.integral_term},
                      {"gamma0", d.gamma0},
                      {"gamma1", d.gamma1}}}};
}

Json profile_to_json(const SsfProfile& profile) {
    Json jumps = Json::array();
    for (const auto& j : profile.jumps) {
        jumps.push_back(Json{{"lambda", j.location}, {"jump", j.jump}});
    }
    Json out{{"jumps", std::move(jumps)}, {"merge_kappa", profile.merge_kappa}};
    if (profile.bounded) {
        out["domain"] = Json::array({profile.domain_lo, profile.domain_hi});
    }
    return out;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace specflow
