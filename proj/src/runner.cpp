#include "specflow/runner.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "specflow/doi.hpp"
#include "specflow/instance.hpp"
#include "specflow/sflow.hpp"
#include "specflow/ssf.hpp"
#include "specflow/verify.hpp"

namespace specflow {

namespace {

const std::set<std::string>& known_tasks() {
    static const std::set<std::string> tasks{"ssf", "sf", "eta", "doi", "verify", "demo"};
    return tasks;
}

ContextPtr context_from_config(const ExperimentConfig& config, Rng& rng) {
    if (!config.algebra.is_null()) return context_from_json(config.algebra);
    RandomSpec spec;
    return random_context(rng, spec);
}

std::vector<double> mu_grid_from(const Json& parameters, const BlockOperator& h0,
                                 const BlockOperator& h1) {
    if (parameters.contains("mu_grid")) {
        return parameters.at("mu_grid").get<std::vector<double>>();
    }
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double lo = std::min(es0.min_value(), es1.min_value()) - 0.5;
    const double hi = std::max(es0.max_value(), es1.max_value()) + 0.5;
    std::vector<double> grid;
    for (int i = 0; i < 21; ++i) grid.push_back(lo + (hi - lo) * i / 20.0);
    return grid;
}

WeightFunction weight_from(const Json& parameters) {
    if (parameters.contains("weight")) return weight_from_json(parameters.at("weight"));
    return gaussian(1.0);
}

QuadratureSpec quadrature_from(const Json& parameters) {
    if (parameters.contains("quadrature")) return quadrature_from_json(parameters.at("quadrature"));
    return QuadratureSpec{};
}

void run_ssf_task(const ExperimentConfig& config, const BlockOperator& h0, const BlockOperator& h1,
                  Report& report) {
    const QuadratureSpec spec = quadrature_from(config.parameters);
    const SsfProfile profile = ssf_profile(h0, h1);

    Table jumps{"xi_jumps", {"lambda", "jump", "method"}, {}};
    for (const auto& j : profile.jumps) {
        jumps.add_row(Json{{"lambda", j.location}, {"jump", j.jump}, {"method", "ssf_kernel"}});
    }
    report.tables.push_back(std::move(jumps));

    Table sweep{"xi_sweep", {"lambda", "xi_left", "xi_half", "xi_right", "method"}, {}};
    for (double lam : mu_grid_from(config.parameters, h0, h1)) {
        sweep.add_row(Json{{"lambda", lam},
                           {"xi_left", ssf_eval_left(profile, lam)},
                           {"xi_half", ssf_eval(profile, lam)},
                           {"xi_right", ssf_eval_right(profile, lam)},
                           {"method", "ssf_kernel"}});
    }
    report.tables.push_back(std::move(sweep));

    const WeightFunction f = weight_from(config.parameters);
    const double tf_residual = trace_formula_residual(h0, h1, f);
    report.checks.push_back(
        {"trace_formula_residual", tf_residual <= config.tol, tf_residual, config.tol, f.name});
    report.extra = Json{{"profile", profile_to_json(profile)}};

    // Absolute continuity of the spectral shift measure on one window.
    const EigenSystem es0 = eigendecompose(h0);
    const Interval window{es0.min_value() - 0.5, es0.max_value() + 0.5, false, true};
    const double quad_mass = ssm_quadrature(h0, h1 - h0, window, spec);
    const double xi_mass = profile_measure(profile, window.lo, window.hi);
    const double ssm_residual = std::abs(quad_mass - xi_mass);
    report.checks.push_back({"spectral_shift_measure_vs_profile", ssm_residual <= 1e-6, ssm_residual,
                             1e-6, "Xi(window) vs int_window xi"});
}

void run_sf_task(const ExperimentConfig& config, const BlockOperator& h0, const BlockOperator& h1,
                 Report& report) {
    const QuadratureSpec spec = quadrature_from(config.parameters);
    std::vector<double> eps_list{1.0};
    if (config.parameters.contains("eps")) {
        eps_list = config.parameters.at("eps").get<std::vector<double>>();
    }
    const ContextPtr ctx = h0.context();
    const BlockOperator id = BlockOperator::identity(ctx);

    Table sweep{"sf_sweep", {"mu", "value", "oracle", "residual", "method"}, {}};
    double worst = 0.0;
    for (double mu : mu_grid_from(config.parameters, h0, h1)) {
        const double oracle = sf_crossing(h0, h1, mu).value;
        sweep.add_row(Json{{"mu", mu},
                           {"value", oracle},
                           {"oracle", oracle},
                           {"residual", 0.0},
                           {"method", "crossing"}});
        const double by_ssf = sf_from_ssf(h0, h1, mu).value;
        sweep.add_row(Json{{"mu", mu},
                           {"value", by_ssf},
                           {"oracle", oracle},
                           {"residual", std::abs(by_ssf - oracle)},
                           {"method", "ssf_kernel"}});
        worst = std::max(worst, std::abs(by_ssf - oracle));
        for (double eps : eps_list) {
            const double by_theta = sf_theta(h0 - mu * id, h1 - mu * id, eps, spec).value;
            sweep.add_row(Json{{"mu", mu},
                               {"value", by_theta},
                               {"oracle", oracle},
                               {"residual", std::abs(by_theta - oracle)},
                               {"method", "theta"}});
            worst = std::max(worst, std::abs(by_theta - oracle));
        }
    }
    report.tables.push_back(std::move(sweep));
    report.checks.push_back({"sf_methods_vs_oracle", worst <= std::max(config.tol, 1e-6), worst,
                             std::max(config.tol, 1e-6), "ssf_kernel and theta against crossing"});

    // Full result objects (value, method, diagnostics) at the first level.
    const double mu0 = mu_grid_from(config.parameters, h0, h1).front();
    report.extra = Json{{"sf_at_first_mu",
                         Json::array({sf_result_to_json(sf_crossing(h0, h1, mu0)),
                                      sf_result_to_json(sf_from_ssf(h0, h1, mu0)),
                                      sf_result_to_json(sf_theta(h0 - mu0 * id, h1 - mu0 * id,
                                                                 eps_list.front(), spec))})}};
}

void run_eta_task(const ExperimentConfig& config, const BlockOperator& h0, Report& report) {
    const QuadratureSpec spec = quadrature_from(config.parameters);
    std::vector<double> eps_list{0.01, 0.1, 1.0};
    if (config.parameters.contains("eps")) {
        eps_list = config.parameters.at("eps").get<std::vector<double>>();
    }
    Table table{"eta", {"eps", "eta_closed", "eta_quadrature", "residual", "method"}, {}};
    double worst = 0.0;
    for (double eps : eps_list) {
        const double closed = eta_eps(h0, eps);
        const double quad = eta_eps_quadrature(h0, eps, spec);
        worst = std::max(worst, std::abs(closed - quad));
        table.add_row(Json{{"eps", eps},
                           {"eta_closed", closed},
                           {"eta_quadrature", quad},
                           {"residual", std::abs(closed - quad)},
                           {"method", "theta"}});
    }
    report.tables.push_back(std::move(table));
    report.checks.push_back(
        {"eta_closed_vs_quadrature", worst <= config.tol, worst, config.tol, ""});
}

void run_doi_task(const ExperimentConfig& config, const BlockOperator& h0, const BlockOperator& h1,
                  Report& report) {
    const BlockOperator v = h1 - h0;
    Json wj = config.parameters.contains("weight") ? config.parameters.at("weight")
                                                   : Json{{"kind", "mollifier"}, {"eps", 1.5}};
    const WeightFunction f = weight_from_json(wj);

    const BlockOperator exact = doi_schur(h1, h0, v, f);
    const BlockOperator lhs = matrix_function(h1, f.eval) - matrix_function(h0, f.eval);
    const double dk = (lhs - exact).op_norm() / (1.0 + v.op_norm());
    report.checks.push_back({"daletskii_krein_residual", dk <= 1e-9, dk, 1e-9, f.name});

    Table table{"doi_engines", {"s0_nodes", "s1_nodes", "rel_error", "method"}, {}};
    if (f.compact_support() && f.smoothness >= 2) {
        const double scale = std::max(exact.op_norm(), 1e-12);
        PiRegionQuadrature quad;
        quad.s0_count = 192;
        quad.s1_count = 48;
        double prev = 0.0;
        for (int level = 0; level < 2; ++level) {
            const double err = (doi_fourier(h1, h0, v, f, quad) - exact).op_norm() / scale;
            table.add_row(Json{{"s0_nodes", quad.s0_count},
                               {"s1_nodes", quad.s1_count},
                               {"rel_error", err},
                               {"method", "bounded_formula"}});
            if (level == 1) {
                report.checks.push_back({"doi_engine_agreement", err <= 1e-3, err, 1e-3,
                                         "fourier vs schur at 384x96 nodes"});
                report.checks.push_back({"doi_node_doubling", err <= 0.5 * prev || err <= 1e-5,
                                         err, 0.5 * std::max(prev, 2e-5),
                                         "error halves from 192x48 to 384x96"});
            }
            prev = err;
            quad.s0_count *= 2;
            quad.s1_count *= 2;
        }
    }
    report.tables.push_back(std::move(table));
}

void run_demo_task(const ExperimentConfig& config, Report& report) {
    const int n = config.parameters.contains("n") ? config.parameters.at("n").get<int>() : 5;
    const double mu =
        config.parameters.contains("mu") ? config.parameters.at("mu").get<double>() : 0.5;
    const auto [h0, h1] = lattice_shift(n);
    const SpectralFlowResult sf = sf_crossing(h0, h1, mu);
    const SsfProfile profile = ssf_profile(h0, h1);

    Table table{"lattice_shift", {"mu", "sf", "method"}, {}};
    table.add_row(Json{{"mu", mu}, {"sf", sf.value}, {"method", to_string(sf.method)}});
    report.tables.push_back(std::move(table));

    Table xi{"xi_bulk", {"lambda", "xi_half", "method"}, {}};
    double worst = std::abs(sf.value - 1.0);
    for (int i = 1; i < 2 * n; ++i) {
        const double lam = -n + 0.5 + i;  // interior points of (-n+1/2, n+1/2)
        const double value = ssf_eval(profile, lam);
        worst = std::max(worst, std::abs(value - 1.0));
        xi.add_row(Json{{"lambda", lam}, {"xi_half", value}, {"method", "ssf_kernel"}});
    }
    report.tables.push_back(std::move(xi));
    report.checks.push_back({"lattice_shift_unit_flow", worst <= 1e-12, worst, 1e-12,
                             "sf(mu) = 1 and xi = 1 on the bulk"});
}

void run_verify_task(const ExperimentConfig& config, Report& report) {
    const VerifyReport vr = run_verification(config.seed, nullptr);
    Table table{"criteria", {"index", "name", "pass", "worst", "tolerance", "method"}, {}};
    for (const auto& c : vr.criteria) {
        table.add_row(Json{{"index", c.index},
                           {"name", c.name},
                           {"pass", c.pass},
                           {"worst", c.worst},
                           {"tolerance", c.tolerance},
                           {"method", "verify"}});
        report.checks.push_back({c.name, c.pass, c.worst, c.tolerance, c.detail});
    }
    report.tables.push_back(std::move(table));
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
    ExperimentConfig config;
    if (j.contains("seed")) config.seed = j.at("seed").get<uint64_t>();
    if (j.contains("algebra")) config.algebra = j.at("algebra");
    if (j.contains("instance")) config.instance = j.at("instance");
    if (j.contains("task")) config.task = j.at("task").get<std::string>();
    if (j.contains("parameters")) config.parameters = j.at("parameters");
    if (j.contains("output")) {
        const auto& out = j.at("output");
        if (out.contains("dir")) config.out_dir = out.at("dir").get<std::string>();
        if (out.contains("format")) config.format = out.at("format").get<std::string>();
    }
    if (j.contains("tol")) config.tol = j.at("tol").get<double>();
    if (config.task.empty()) throw std::invalid_argument("config: missing task");
    if (known_tasks().count(config.task) == 0) {
        throw std::invalid_argument("config: unknown task \"" + config.task + "\"");
    }
    return config;
}

std::pair<BlockOperator, BlockOperator> generate_instance(const ExperimentConfig& config) {
    Rng rng(config.seed);
    const std::string kind =
        config.instance.is_null() ? "random" : config.instance.at("kind").get<std::string>();
    if (kind == "explicit") {
        return {operator_from_json(config.instance.at("h0")),
                operator_from_json(config.instance.at("h1"))};
    }
    if (kind == "lattice_shift") {
        return lattice_shift(config.instance.at("n").get<int>());
    }
    const ContextPtr ctx = context_from_config(config, rng);
    double lo = -2.0, hi = 2.0;
    if (!config.instance.is_null() && config.instance.contains("spectrum")) {
        lo = config.instance.at("spectrum").at(0).get<double>();
        hi = config.instance.at("spectrum").at(1).get<double>();
    }
    BlockOperator h0 = random_hermitian(ctx, rng, lo, hi);
    if (kind == "gauge") {
        BlockOperator h1 = gauge_transform(h0, rng);
        return {std::move(h0), std::move(h1)};
    }
    if (kind == "random") {
        BlockOperator h1 = h0 + random_hermitian(ctx, rng, -1.0, 1.0);
        return {std::move(h0), std::move(h1)};
    }
    throw std::invalid_argument("config: unknown instance kind \"" + kind + "\"");
}

Report run(const ExperimentConfig& config) {
    Report report;
    report.inputs = Json{{"seed", config.seed},
                         {"task", config.task},
                         {"instance", config.instance},
                         {"parameters", config.parameters},
                         {"tol", config.tol}};

    if (config.task == "verify") {
        run_verify_task(config, report);
    } else if (config.task == "demo") {
        run_demo_task(config, report);
    } else {
        const auto [h0, h1] = generate_instance(config);
        report.inputs["context"] = context_to_json(*h0.context());
        if (config.task == "ssf") {
            run_ssf_task(config, h0, h1, report);
        } else if (config.task == "sf") {
            run_sf_task(config, h0, h1, report);
        } else if (config.task == "eta") {
            run_eta_task(config, h0, report);
        } else if (config.task == "doi") {
            run_doi_task(config, h0, h1, report);
        }
    }

    if (!config.out_dir.empty()) report.write(config.out_dir, config.format);
    return report;
}

}  // namespace specflow
