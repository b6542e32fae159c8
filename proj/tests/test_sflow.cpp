#include <doctest.h>

#include <cmath>

#include "specflow/instance.hpp"
#include "specflow/sflow.hpp"
#include "test_helpers.hpp"

using namespace specflow;
using specflow::testing::diag_op;

TEST_CASE("crossing oracle counts weighted flow") {
    const ContextPtr c1 = make_simple_context(1);
    CHECK(sf_crossing(diag_op(c1, {{-1.0}}), diag_op(c1, {{1.0}}), 0.0).value ==
          doctest::Approx(1.0));

    const ContextPtr ctx = make_context({{1, 1.0}, {1, 0.5}});
    const BlockOperator h0 = diag_op(ctx, {{-1.0}, {-1.0}});
    const BlockOperator h1 = diag_op(ctx, {{1.0}, {1.0}});
    CHECK(sf_crossing(h0, h1, 0.0).value == doctest::Approx(1.5));

    Rng rng(107);
    const ContextPtr big = make_context({{4, 1.0}, {3, 0.6}});
    const BlockOperator a = random_hermitian(big, rng, -2.0, 2.0);
    const BlockOperator b = gauge_transform(a, rng);
    for (double mu : {-2.5, -1.0, 0.0, 0.4, 1.7}) {
        CHECK(sf_crossing(a, b, mu).value == 0.0);
    }
}

TEST_CASE("sf_from_ssf equals the oracle including kernel corrections") {
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{0.0, 2.0}});
    const BlockOperator h1 = diag_op(c2, {{1.0, 1.0}});
    const SpectralFlowResult res = sf_from_ssf(h0, h1, 1.0);
    CHECK(res.diagnostics.xi == doctest::Approx(0.0));
    CHECK(res.diagnostics.ker_h1 == doctest::Approx(2.0));
    CHECK(res.value == doctest::Approx(1.0));
    CHECK(sf_crossing(h0, h1, 1.0).value == doctest::Approx(1.0));
    CHECK(sf_from_ssf(h0, h1, -3.0).value == doctest::Approx(0.0));

    Rng rng(109);
    for (int inst = 0; inst < 50; ++inst) {
        const ContextPtr ctx = random_context(rng);
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
        const auto vals = eigendecompose(a).sorted_values();
        std::vector<double> grid{vals.front().first, vals.back().first};
        for (int i = 0; i < 7; ++i) grid.push_back(rng.uniform(-3.5, 3.5));
        for (double mu : grid) {
            CHECK(std::abs(sf_from_ssf(a, b, mu).value - sf_crossing(a, b, mu).value) <= 1e-12);
        }
    }
}

TEST_CASE("sf concatenation and antisymmetry") {
    Rng rng(113);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 0.4}});
    const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
    const BlockOperator c = b + random_hermitian(ctx, rng, -1.0, 1.0);
    for (double mu : {-1.0, 0.0, 0.8}) {
        const double ab = sf_crossing(a, b, mu).value;
        const double bc = sf_crossing(b, c, mu).value;
        const double ac = sf_crossing(a, c, mu).value;
        CHECK(ab + bc == doctest::Approx(ac).epsilon(1e-13));
        CHECK(sf_crossing(b, a, mu).value == doctest::Approx(-ab).epsilon(1e-13));
    }
}

TEST_CASE("gamma_h endpoint correction") {
    QuadratureSpec spec;
    const auto af = [](double s) { return s * s; };

    // Already two-valued: gamma vanishes.
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator sgn = diag_op(c2, {{-1.0, 1.0}});
    CHECK(std::abs(gamma_h(sgn, af, -1.0, 1.0, spec)) <= 1e-12);

    // Scalar case: gamma = int_c^b h.
    const double c = 0.35;
    const ContextPtr c1 = make_simple_context(1);
    const double gamma = gamma_h(diag_op(c1, {{c}}), af, -1.0, 1.0, spec);
    const double expect =
        integrate_scalar([&](double x) { return af((1.0 - x) * (x + 1.0)); }, spec, c, 1.0).value;
    CHECK(gamma == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("gamma_h with shrinking mollifier approaches half the kernel trace") {
    QuadratureSpec spec;
    Rng rng(127);
    const ContextPtr ctx = make_context({{2, 1.0}, {2, 0.5}});
    std::vector<Eigen::VectorXd> spectra;
    double kernel_weight = 0.0;
    for (int k = 0; k < ctx->block_count(); ++k) {
        const auto& blk = ctx->blocks()[static_cast<size_t>(k)];
        Eigen::VectorXd lam(blk.dim);
        for (Eigen::Index i = 0; i < blk.dim; ++i) {
            if (k == 0 && i == 0) {
                lam[i] = 0.0;
                kernel_weight += blk.weight;
            } else {
                lam[i] = (i % 2 == 0 ? 1.0 : -1.0) * rng.uniform(0.25, 0.6);
            }
        }
        spectra.push_back(lam);
    }
    const BlockOperator f = hermitian_with_spectrum(ctx, rng, spectra);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const WeightFunction moll = mollifier(eps, 0.0);
        const auto af = [&moll](double s) { return moll.eval(std::sqrt(std::max(1.0 - s, 0.0))); };
        const double gamma = gamma_h(f, af, -1.0, 1.0, spec);
        const double err = std::abs(gamma - 0.5 * kernel_weight);
        CHECK(err <= prev + 1e-9);
        prev = err;
    }
    CHECK(prev <= 1e-2);
}

TEST_CASE("bounded spectral flow formula") {
    QuadratureSpec spec;
    const auto af = [](double s) { return s * s; };
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator f0 = diag_op(c2, {{-0.5, 0.25}});
    CHECK(std::abs(sf_bounded_formula(f0, f0, af, -1.0, 1.0, spec).value) <= 1e-8);

    const BlockOperator f1 = diag_op(c2, {{0.5, -0.75}});
    const double expect = sf_crossing(f0, f1, 0.0).value;
    CHECK(sf_bounded_formula(f0, f1, af, -1.0, 1.0, spec).value ==
          doctest::Approx(expect).epsilon(1e-6));

    // Random pairs in the bounded picture via the f_map image.
    Rng rng(131);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 1.5}});
    for (int i = 0; i < 5; ++i) {
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
        const BlockOperator fa = f_map(a);
        const BlockOperator fb = f_map(b);
        const double oracle = sf_crossing(fa, fb, 0.0).value;
        const SpectralFlowResult res = sf_bounded_formula(fa, fb, af, -1.0, 1.0, spec);
        CHECK(std::abs(res.value - oracle) <= 1e-6);

        // Invariance under the choice of the localizing profile.
        const auto af2 = [](double s) { return s; };
        const SpectralFlowResult res2 = sf_bounded_formula(fa, fb, af2, -1.0, 1.0, spec);
        CHECK(std::abs(res2.value - res.value) <= 1e-6);
    }

    // Spectra escaping [a, b] are refused.
    const BlockOperator wide = diag_op(c2, {{-2.0, 0.5}});
    CHECK_THROWS_AS(sf_bounded_formula(wide, f1, af, -1.0, 1.0, spec), std::invalid_argument);
}

TEST_CASE("projection pair formula") {
    QuadratureSpec spec;
    const auto af = [](double s) { return s; };
    const ContextPtr c3 = make_simple_context(3);
    const BlockOperator p = diag_op(c3, {{1.0, 0.0, 0.0}});
    const BlockOperator q = diag_op(c3, {{1.0, 1.0, 0.0}});

    CHECK(std::abs(sf_projection_pair(ProjectionPair(p, p), af, -1.0, 1.0, spec).value) <= 1e-12);

    const SpectralFlowResult res = sf_projection_pair(ProjectionPair(p, q), af, -1.0, 1.0, spec);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
    // C_{a,b} for af(s) = s is (b-a)^3/6.
    CHECK(1.0 / res.diagnostics.h_scale == doctest::Approx(8.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("one-form integrals are exact and path independent") {
    QuadratureSpec spec;
    Rng rng(137);
    const ContextPtr ctx = make_context({{4, 1.0}, {2, 0.5}});
    const WeightFunction f = gaussian(0.8);
    const BlockOperator h0 = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator h1 = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator mid1 = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator mid2 = random_hermitian(ctx, rng, -2.0, 2.0);

    const double closed = one_form_integral(PiecewisePath({h0, mid1, mid2, h0}), f, spec);
    CHECK(std::abs(closed) <= 1e-8);

    const double straight = one_form_integral(PiecewisePath::line(h0, h1), f, spec);
    const double detour = one_form_integral(PiecewisePath({h0, mid1, h1}), f, spec);
    CHECK(std::abs(straight - detour) <= 1e-8);

    // Commuting diagonal path against the scalar closed form.
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator a = diag_op(c2, {{-1.0, 0.5}});
    const BlockOperator b = diag_op(c2, {{0.25, 2.0}});
    const double got = one_form_integral(PiecewisePath::line(a, b), f, spec);
    double expect = 0.0;
    for (int i = 0; i < 2; ++i) {
        expect += f.antideriv(b.block(0)(i, i).real()) - f.antideriv(a.block(0)(i, i).real());
    }
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("theta potential and its differential") {
    QuadratureSpec spec;
    const WeightFunction f = gaussian(1.2);
    const ContextPtr c1 = make_simple_context(1);
    const BlockOperator z = BlockOperator::zeros(c1);
    CHECK(std::abs(theta_potential(z, z, f, spec)) <= 1e-14);

    const double t = 1.7;
    const double theta = theta_potential(z, diag_op(c1, {{t}}), f, spec);
    CHECK(theta == doctest::Approx(f.antideriv(t) - f.antideriv(0.0)).epsilon(1e-12));

    // d theta(X) = tau(X f(H)) via central differences.
    Rng rng(139);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 2.0}});
    const BlockOperator h0 = random_hermitian(ctx, rng, -1.5, 1.5);
    const BlockOperator h = random_hermitian(ctx, rng, -1.5, 1.5);
    const BlockOperator x = random_hermitian(ctx, rng, -1.0, 1.0);
    const double s = 1e-4;
    const double dtheta = (theta_potential(h0, h + s * x, f, spec) -
                           theta_potential(h0, h - s * x, f, spec)) /
                          (2.0 * s);
    const double alpha = real_trace(x * matrix_function(h, f.eval));
    CHECK(std::abs(dtheta - alpha) <= 1e-6 * (1.0 + std::abs(alpha)));
}

TEST_CASE("eta invariant closed form and quadrature") {
    QuadratureSpec spec;
    const ContextPtr c2 = make_simple_context(2);
    CHECK(eta_eps(BlockOperator::zeros(c2), 0.5) == 0.0);
    CHECK(std::abs(eta_eps(diag_op(c2, {{1.0, -1.0}}), 0.3)) <= 1e-14);

    const BlockOperator h = diag_op(c2, {{1.0, -2.0}});
    const double eps = 0.01;
    const double expect = std::erfc(std::sqrt(eps)) - std::erfc(2.0 * std::sqrt(eps));
    CHECK(std::abs(eta_eps(h, eps) - expect) <= 1e-10);
    CHECK(std::abs(eta_eps_quadrature(h, eps, spec) - expect) <= 1e-8);

    Rng rng(149);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 0.5}});
    for (int i = 0; i < 10; ++i) {
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const double e = 0.01 * std::pow(10.0, i % 3);
        CHECK(std::abs(eta_eps(a, e) - eta_eps_quadrature(a, e, spec)) <= 1e-8);
    }
    CHECK_THROWS_AS(eta_eps(h, 0.0), std::invalid_argument);
}

TEST_CASE("theta-summable spectral flow formula") {
    QuadratureSpec spec;
    const ContextPtr c1 = make_simple_context(1);
    const BlockOperator h0 = diag_op(c1, {{-1.0}});
    const BlockOperator h1 = diag_op(c1, {{1.0}});
    CHECK(std::abs(sf_theta(h0, h0, 0.5, spec).value) <= 1e-10);

    for (double eps : {0.05, 0.5, 5.0}) {
        const SpectralFlowResult res = sf_theta(h0, h1, eps, spec);
        // Scalar walkthrough: integral term erf(sqrt(eps)), eta terms
        // +-erfc(sqrt(eps)), kernels empty; total 1.
        CHECK(res.diagnostics.integral_term ==
              doctest::Approx(std::erf(std::sqrt(eps))).epsilon(1e-9));
        CHECK(res.diagnostics.eta1 == doctest::Approx(std::erfc(std::sqrt(eps))));
        CHECK(res.diagnostics.eta0 == doctest::Approx(-std::erfc(std::sqrt(eps))));
        CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));
    }

    Rng rng(151);
    for (int i = 0; i < 20; ++i) {
        RandomSpec rs;
        rs.max_total_dim = 10;
        const ContextPtr ctx = random_context(rng, rs);
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
        const double oracle = sf_crossing(a, b, 0.0).value;
        double lo = INFINITY, hi = -INFINITY;
        for (double eps : {0.05, 5.0}) {
            const double value = sf_theta(a, b, eps, spec).value;
            CHECK(std::abs(value - oracle) <= 1e-6);
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
        CHECK(hi - lo <= 2e-6);
    }
}

TEST_CASE("summable formulas for unitarily equivalent endpoints") {
    QuadratureSpec spec;
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{-1.0, 1.0}});
    Matrix swap(2, 2);
    swap << 0.0, 1.0, 1.0, 0.0;
    const BlockOperator h1 =
        BlockOperator::self_adjoint(c2, {swap * h0.block(0) * swap.adjoint()});
    CHECK(std::abs(sf_summable(h0, h1, gaussian(1.0), 0.0, spec).value) <= 1e-7);

    Rng rng(157);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 0.5}});
    const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator b = gauge_transform(a, rng);
    for (double mu : {-1.0, 0.0, 0.6}) {
        CHECK(std::abs(sf_summable(a, b, gaussian(1.0), mu, spec).value) <= 1e-7);
        CHECK(std::abs(sf_summable(a, b, resolvent_power(2.0), mu, spec).value) <= 1e-7);
    }

    // Refuses endpoints that are not unitarily equivalent.
    const BlockOperator c = a + random_hermitian(ctx, rng, -0.5, 0.5);
    CHECK_THROWS_AS(sf_summable(a, c, gaussian(1.0), 0.0, spec), std::invalid_argument);
}

TEST_CASE("infinitesimal spectral flow pairing") {
    QuadratureSpec spec;
    const ContextPtr c1 = make_simple_context(1);
    const BlockOperator z = diag_op(c1, {{0.3}});
    CHECK(std::abs(infinitesimal_pairing(PiecewisePath({z, z}), mollifier(0.5, 0.0), spec)) <=
          1e-12);

    // 1x1: h0 = -1, v = 2, phi a bump inside (-1, 1): both sides are 1.
    const BlockOperator h0 = diag_op(c1, {{-1.0}});
    const BlockOperator h1 = diag_op(c1, {{1.0}});
    const WeightFunction phi = mollifier(0.5, 0.0);
    const double lhs = infinitesimal_pairing(PiecewisePath::line(h0, h1), phi, spec);
    const double rhs = sf_weighted_by(h0, h1, phi, spec);
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rhs == doctest::Approx(1.0).epsilon(1e-10));

    Rng rng(163);
    const ContextPtr ctx = make_context({{3, 1.0}, {3, 0.3}});
    for (int i = 0; i < 10; ++i) {
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator m = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator b = random_hermitian(ctx, rng, -2.0, 2.0);
        const WeightFunction bump = mollifier(rng.uniform(0.5, 1.5), rng.uniform(-1.0, 1.0));
        const double path_side = infinitesimal_pairing(PiecewisePath({a, m, b}), bump, spec);
        const double sf_side = sf_weighted_by(a, b, bump, spec);
        CHECK(std::abs(path_side - sf_side) <= 1e-7);
    }
}

TEST_CASE("gamma/eta identity") {
    QuadratureSpec spec;
    const ContextPtr c2 = make_simple_context(2);
    // Symmetric spectrum, no kernel: gamma and eta both vanish.
    CHECK(gamma_eta_identity_check(diag_op(c2, {{1.0, -1.0}}), 0.5, spec) <= 1e-6);

    // Pure kernel: gamma = 1/2 tau[ker].
    const ContextPtr c1 = make_simple_context(1);
    CHECK(gamma_eta_identity_check(BlockOperator::zeros(c1), 0.7, spec) <= 1e-6);

    Rng rng(167);
    const ContextPtr ctx = make_context({{3, 1.0}, {3, 0.5}});
    for (int i = 0; i < 6; ++i) {
        const BlockOperator h = random_hermitian(ctx, rng, -2.0, 2.0);
        for (double eps : {0.1, 1.0}) {
            CHECK(gamma_eta_identity_check(h, eps, spec) <= 1e-6);
        }
    }
}

TEST_CASE("spectral flow method names") {
    CHECK(to_string(SfMethod::crossing) == "crossing");
    CHECK(to_string(SfMethod::ssf_kernel) == "ssf_kernel");
    CHECK(to_string(SfMethod::bounded_formula) == "bounded_formula");
    CHECK(to_string(SfMethod::theta) == "theta");
    CHECK(to_string(SfMethod::summable) == "summable");
    CHECK(to_string(SfMethod::projection_pair) == "projection_pair");
}
