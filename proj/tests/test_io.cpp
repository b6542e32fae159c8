#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "specflow/instance.hpp"
#include "specflow/json_io.hpp"
#include "specflow/runner.hpp"
#include "test_helpers.hpp"

using namespace specflow;
using specflow::testing::diag_op;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("matrix and operator json round trips") {
    Rng rng(171);
    Matrix m(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = rng.cnormal();
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    const ContextPtr ctx = make_context({{2, 1.0}, {3, 0.5}});
    const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator b = operator_from_json(operator_to_json(a));
    CHECK(same_context(a, b));
    CHECK((a - b).max_abs() == 0.0);

    // Real matrices may omit the imaginary part.
    const Matrix r = matrix_from_json(Json{{"re", {{1.0, 2.0}, {3.0, 4.0}}}});
    CHECK(r(1, 0).real() == 3.0);
    CHECK(r(1, 0).imag() == 0.0);
}

TEST_CASE("weight catalog lookup by descriptor") {
    const WeightFunction g = weight_from_json(Json{{"kind", "gaussian"}, {"eps", 0.5}});
    CHECK(g.eval(0.0) == doctest::Approx(1.0));
    const WeightFunction r = weight_from_json(Json{{"kind", "resolvent_power"}, {"p", 2.0}});
    CHECK(r.normalization == doctest::Approx(M_PI));
    const WeightFunction m =
        weight_from_json(Json{{"kind", "mollifier"}, {"eps", 1.0}, {"center", 0.25}});
    CHECK(m.support_hi == doctest::Approx(1.25));
    CHECK_THROWS_AS(weight_from_json(Json{{"kind", "unknown"}}), std::invalid_argument);
}

TEST_CASE("quadrature spec round trip") {
    QuadratureSpec spec;
    spec.order = 12;
    spec.tolerance = 1e-7;
    const QuadratureSpec back = quadrature_from_json(quadrature_to_json(spec));
    CHECK(back.order == 12);
    CHECK(back.tolerance == 1e-7);
    CHECK(back.max_subdivisions == spec.max_subdivisions);
}

TEST_CASE("spectral flow result serialization carries the diagnostics") {
    SpectralFlowResult res;
    res.value = 1.5;
    res.method = SfMethod::theta;
    res.diagnostics.eta1 = 0.25;
    const Json j = sf_result_to_json(res);
    CHECK(j.at("value").get<double>() == 1.5);
    CHECK(j.at("method").get<std::string>() == "theta");
    CHECK(j.at("diagnostics").at("eta1").get<double>() == 0.25);
    for (const char* key : {"xi", "ker_h0", "ker_h1", "eta0", "eta1", "integral_term", "gamma0",
                            "gamma1"}) {
        CHECK(j.at("diagnostics").contains(key));
    }
}

TEST_CASE("profile serialization lists the jumps") {
    const ContextPtr c2 = make_simple_context(2);
    const SsfProfile p = ssf_profile(diag_op(c2, {{0.0, 2.0}}), diag_op(c2, {{1.0, 1.0}}));
    const Json j = profile_to_json(p);
    REQUIRE(j.at("jumps").size() == 3);
    CHECK(j.at("jumps").at(1).at("lambda").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("jumps").at(1).at("jump").get<double>() == doctest::Approx(-2.0));
}

TEST_CASE("config parsing validates the task") {
    CHECK_THROWS_AS(parse_config(Json{{"seed", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(Json{{"task", "frobnicate"}}), std::invalid_argument);
    const ExperimentConfig config = parse_config(Json{
        {"seed", 7}, {"task", "ssf"}, {"output", Json{{"dir", "out"}, {"format", "csv"}}}});
    CHECK(config.seed == 7);
    CHECK(config.format == "csv");
}

TEST_CASE("instance generation is deterministic and matches its recipe") {
    ExperimentConfig config;
    config.task = "ssf";
    config.seed = 123;
    config.instance = Json{{"kind", "lattice_shift"}, {"n", 3}};
    const auto [l0, l1] = generate_instance(config);
    const auto v0 = eigendecompose(l0).sorted_values();
    const auto v1 = eigendecompose(l1).sorted_values();
    CHECK(v0.front().first == doctest::Approx(-3.0));
    CHECK(v0.back().first == doctest::Approx(3.0));
    CHECK(v1.front().first == doctest::Approx(-2.0));
    CHECK(v1.back().first == doctest::Approx(4.0));

    config.instance = Json{{"kind", "gauge"}};
    const auto [g0, g1] = generate_instance(config);
    const auto s0 = eigendecompose(g0).sorted_values();
    const auto s1 = eigendecompose(g1).sorted_values();
    for (size_t i = 0; i < s0.size(); ++i) {
        CHECK(s0[i].first == doctest::Approx(s1[i].first).epsilon(1e-12));
    }

    config.instance = Json{{"kind", "random"}};
    const auto [a0, a1] = generate_instance(config);
    const auto [b0, b1] = generate_instance(config);
    CHECK((a0 - b0).max_abs() == 0.0);
    CHECK((a1 - b1).max_abs() == 0.0);
}

TEST_CASE("explicit instances round trip through the config") {
    Rng rng(217);
    const ContextPtr ctx = make_context({{2, 1.0}, {2, 0.25}});
    const BlockOperator h0 = random_hermitian(ctx, rng, -1.0, 1.0);
    const BlockOperator h1 = random_hermitian(ctx, rng, -1.0, 1.0);
    ExperimentConfig config;
    config.task = "ssf";
    config.instance =
        Json{{"kind", "explicit"}, {"h0", operator_to_json(h0)}, {"h1", operator_to_json(h1)}};
    const auto [a, b] = generate_instance(config);
    CHECK((a - h0).max_abs() == 0.0);
    CHECK((b - h1).max_abs() == 0.0);

    config.instance = Json{{"kind", "frobnicate"}};
    CHECK_THROWS_AS(generate_instance(config), std::invalid_argument);
}

TEST_CASE("reports are deterministic and CSV follows the contract") {
    const auto dir1 = std::filesystem::temp_directory_path() / "specflow_test_report1";
    const auto dir2 = std::filesystem::temp_directory_path() / "specflow_test_report2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);

    ExperimentConfig config;
    config.task = "ssf";
    config.seed = 99;
    config.instance = Json{{"kind", "random"}};
    config.format = "both";

    config.out_dir = dir1.string();
    const Report r1 = run(config);
    config.out_dir = dir2.string();
    const Report r2 = run(config);
    CHECK(r1.all_passed());
    CHECK(read_file(dir1 / "report.json") == read_file(dir2 / "report.json"));
    CHECK(read_file(dir1 / "xi_sweep.csv") == read_file(dir2 / "xi_sweep.csv"));

    const std::string csv = read_file(dir1 / "xi_sweep.csv");
    CHECK(csv.rfind("lambda,xi_left,xi_half,xi_right,method\r\n", 0) == 0);
    CHECK(csv.find("\r\n") != std::string::npos);
}

TEST_CASE("demo task reports unit flow for the lattice shift") {
    ExperimentConfig config;
    config.task = "demo";
    config.parameters = Json{{"n", 5}, {"mu", 0.5}};
    const Report report = run(config);
    CHECK(report.all_passed());
    REQUIRE(!report.tables.empty());
    const auto& row = report.tables.front().rows.front();
    CHECK(row.at("sf").get<double>() == doctest::Approx(1.0));
    CHECK(row.at("method").get<std::string>() == "crossing");
}

TEST_CASE("sf task sweeps methods against the oracle") {
    ExperimentConfig config;
    config.task = "sf";
    config.seed = 31;
    config.instance = Json{{"kind", "random"}};
    config.parameters = Json{{"eps", {0.5}}, {"mu_grid", {-0.5, 0.0, 0.5}}};
    const Report report = run(config);
    CHECK(report.all_passed());
    bool saw_theta = false;
    for (const auto& row : report.tables.front().rows) {
        if (row.at("method") == "theta") {
            saw_theta = true;
            CHECK(row.at("residual").get<double>() <= 1e-6);
        }
    }
    CHECK(saw_theta);
}
