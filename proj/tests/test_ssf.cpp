#include <doctest.h>

#include <cmath>

#include "specflow/instance.hpp"
#include "specflow/ssf.hpp"
#include "test_helpers.hpp"

using namespace specflow;
using specflow::testing::diag_op;

TEST_CASE("ssf profile from diagonal counting") {
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{0.0, 2.0}});

    CHECK(ssf_profile(h0, h0).jumps.empty());

    const BlockOperator h1 = diag_op(c2, {{1.0, 1.0}});
    const SsfProfile p = ssf_profile(h0, h1);
    REQUIRE(p.jumps.size() == 3);
    CHECK(p.jumps[0].location == doctest::Approx(0.0));
    CHECK(p.jumps[0].jump == doctest::Approx(1.0));
    CHECK(p.jumps[1].location == doctest::Approx(1.0));
    CHECK(p.jumps[1].jump == doctest::Approx(-2.0));
    CHECK(p.jumps[2].location == doctest::Approx(2.0));
    CHECK(p.jumps[2].jump == doctest::Approx(1.0));
    CHECK(std::abs(p.total_jump()) <= 1e-14);

    // xi = 1 on (0,1), -1 on (1,2), 0 outside; half-sums at jumps.
    CHECK(ssf_eval(p, 0.5) == doctest::Approx(1.0));
    CHECK(ssf_eval(p, 1.5) == doctest::Approx(-1.0));
    CHECK(ssf_eval(p, 1.0) == doctest::Approx(0.0));
    CHECK(ssf_eval(p, -5.0) == doctest::Approx(0.0));
    CHECK(ssf_eval(p, 5.0) == doctest::Approx(0.0));
    CHECK(ssf_eval_left(p, 1.0) == doctest::Approx(1.0));
    CHECK(ssf_eval_right(p, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("ssf profile with weighted blocks") {
    const ContextPtr ctx = make_context({{1, 1.0}, {1, 0.5}});
    const BlockOperator h0 = diag_op(ctx, {{-1.0}, {-1.0}});
    const BlockOperator h1 = diag_op(ctx, {{1.0}, {1.0}});
    const SsfProfile p = ssf_profile(h0, h1);
    CHECK(ssf_eval(p, 0.0) == doctest::Approx(1.5));
    CHECK(ssf_eval(p, -2.0) == doctest::Approx(0.0));
}

TEST_CASE("unitarily equivalent endpoints give the empty profile") {
    Rng rng(73);
    const ContextPtr ctx = make_context({{4, 1.0}, {3, 0.4}});
    const BlockOperator h0 = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator h1 = gauge_transform(h0, rng);
    const SsfProfile p = ssf_profile(h0, h1);
    for (double lam : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
        CHECK(ssf_eval(p, lam) == 0.0);
    }
    const auto vals = eigendecompose(h0).sorted_values();
    for (const auto& [lam, w] : vals) {
        (void)w;
        CHECK(ssf_eval(p, lam) == 0.0);
    }
}

TEST_CASE("spectral shift measure quadrature") {
    QuadratureSpec spec;
    const ContextPtr c1 = make_simple_context(1);
    const BlockOperator h0 = diag_op(c1, {{-1.0}});
    const BlockOperator v = diag_op(c1, {{2.0}});

    CHECK(std::abs(ssm_quadrature(h0, BlockOperator::zeros(c1), {-5.0, 5.0, false, true}, spec)) <=
          1e-12);
    // 1x1 walkthrough: H_r = -1 + 2r sweeps (-1, 1]; integrand is 2 for r > 0.
    CHECK(ssm_quadrature(h0, v, {-1.0, 1.0, false, true}, spec) == doctest::Approx(2.0).epsilon(1e-9));

    Rng rng(79);
    const ContextPtr ctx = make_context({{5, 1.0}, {3, 0.75}});
    const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator w = random_hermitian(ctx, rng, -1.0, 1.0);
    const SsfProfile profile = ssf_profile(a, a + w);
    for (int i = 0; i < 3; ++i) {
        double lo = rng.uniform(-3.0, 3.0);
        double hi = rng.uniform(-3.0, 3.0);
        if (lo > hi) std::swap(lo, hi);
        const double lhs = ssm_quadrature(a, w, {lo, hi, false, true}, spec);
        const double rhs = profile_measure(profile, lo, hi);
        CHECK(std::abs(lhs - rhs) <= 1e-7);
    }
}

TEST_CASE("pairing equates the lambda and path integrals") {
    QuadratureSpec spec;
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{-0.5, 1.5}});
    CHECK(std::abs(pairing(h0, BlockOperator::zeros(c2), gaussian(1.0), spec)) <= 1e-12);

    // f constant 1 over the swept spectral range integrates to tau(V).
    WeightFunction one;
    one.eval = [](double) { return 1.0; };
    one.deriv = [](double) { return 0.0; };
    one.antideriv = [](double x) { return x; };
    const ContextPtr ctx = make_context({{2, 1.0}, {1, 0.5}});
    Rng rng(83);
    const BlockOperator a = random_hermitian(ctx, rng, -1.0, 1.0);
    const BlockOperator v = random_hermitian(ctx, rng, -0.5, 0.5);
    CHECK(pairing(a, v, one, spec) == doctest::Approx(real_trace(v)).epsilon(1e-10));

    // Dual evaluation against the exact step-function integral.
    const WeightFunction f = gaussian(1.0);
    const BlockOperator b = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator w = random_hermitian(ctx, rng, -1.0, 1.0);
    const double path_side = pairing(b, w, f, spec);
    const double lambda_side = integrate_profile_antideriv(ssf_profile(b, b + w), f.antideriv);
    CHECK(std::abs(path_side - lambda_side) <= 1e-8);
}

TEST_CASE("trace formula residuals") {
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{0.0, 2.0}});
    const BlockOperator h1 = diag_op(c2, {{1.0, 1.0}});
    CHECK(trace_formula_residual(h0, h0, gaussian(1.0)) <= 1e-14);

    // Hand computation with f = x^2: tau(f(H1) - f(H0)) = -2 and
    // int f' xi = -2.
    WeightFunction sq;
    sq.eval = [](double x) { return x * x; };
    sq.deriv = [](double x) { return 2.0 * x; };
    CHECK(trace_formula_residual(h0, h1, sq) <= 1e-13);

    Rng rng(89);
    const ContextPtr ctx = make_context({{4, 1.0}, {2, 1.5}});
    for (int i = 0; i < 25; ++i) {
        const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
        const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
        CHECK(trace_formula_residual(a, b, gaussian(1.0)) <= 1e-8);
        CHECK(trace_formula_residual(a, b, resolvent_power(2.0)) <= 1e-8);
    }
}

TEST_CASE("invariance principle pushes the profile through phi") {
    SsfProfile empty;
    CHECK(invariance_map(empty).jumps.empty());

    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{0.0, 2.0}});
    const BlockOperator h1 = diag_op(c2, {{1.0, -1.0}});
    const SsfProfile pushed = invariance_map(ssf_profile(h0, h1));
    // The jump contributed at lambda = 0 stays at 0.
    bool found_zero = false;
    for (const auto& j : pushed.jumps) {
        if (j.location == 0.0) found_zero = true;
    }
    CHECK(found_zero);

    Rng rng(97);
    const ContextPtr ctx = make_context({{4, 1.0}, {3, 0.5}});
    for (int i = 0; i < 20; ++i) {
        const BlockOperator a = random_hermitian(ctx, rng, -3.0, 3.0);
        const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
        const SsfProfile lhs = invariance_map(ssf_profile(a, b));
        const SsfProfile rhs = ssf_profile(f_map(a), f_map(b));
        REQUIRE(lhs.jumps.size() == rhs.jumps.size());
        for (size_t k = 0; k < lhs.jumps.size(); ++k) {
            CHECK(std::abs(lhs.jumps[k].location - rhs.jumps[k].location) <= 1e-10);
            CHECK(std::abs(lhs.jumps[k].jump - rhs.jumps[k].jump) <= 1e-12);
        }
    }
}

TEST_CASE("additivity of xi holds everywhere") {
    const ContextPtr c2 = make_simple_context(2);
    const BlockOperator h0 = diag_op(c2, {{0.0, 2.0}});
    const BlockOperator h1 = diag_op(c2, {{1.0, 3.0}});
    CHECK(additivity_residual(h0, h1, h1, 1.0) <= 1e-14);
    CHECK(additivity_residual(h0, h1, diag_op(c2, {{-1.0, 0.5}}), 0.25) <= 1e-13);

    // Shared exact eigenvalue of all three operators.
    Rng rng(101);
    const ContextPtr ctx = make_context({{3, 1.0}, {2, 0.5}});
    std::vector<Eigen::VectorXd> s0, s1, s2;
    for (const auto& blk : ctx->blocks()) {
        Eigen::VectorXd a(blk.dim), b(blk.dim), c(blk.dim);
        for (Eigen::Index i = 0; i < blk.dim; ++i) {
            a[i] = rng.uniform(-2.0, 2.0);
            b[i] = (i == 0) ? a[i] : rng.uniform(-2.0, 2.0);
            c[i] = (i == 0) ? a[i] : rng.uniform(-2.0, 2.0);
        }
        s0.push_back(a);
        s1.push_back(b);
        s2.push_back(c);
    }
    const BlockOperator a = hermitian_with_spectrum(ctx, rng, s0);
    const BlockOperator b = hermitian_with_spectrum(ctx, rng, s1);
    const BlockOperator c = hermitian_with_spectrum(ctx, rng, s2);
    CHECK(additivity_residual(a, b, c, s0[0][0]) <= 1e-12);
    CHECK(additivity_residual(a, b, c, 0.123456) <= 1e-12);
}

TEST_CASE("bounded-picture profiles satisfy the trace formula") {
    // F0, F1 with spectra in (-1, 1) and a test function supported inside.
    Rng rng(211);
    const ContextPtr ctx = make_context({{4, 1.0}, {2, 0.5}});
    for (int i = 0; i < 10; ++i) {
        const BlockOperator f0 = f_map(random_hermitian(ctx, rng, -3.0, 3.0));
        const BlockOperator f1 = f_map(random_hermitian(ctx, rng, -3.0, 3.0));
        const WeightFunction h = mollifier(0.6, 0.1);  // supported in (-0.5, 0.7)
        CHECK(trace_formula_residual(f0, f1, h) <= 1e-8);
    }
}

TEST_CASE("antisymmetry of the spectral shift function") {
    Rng rng(103);
    const ContextPtr ctx = make_context({{4, 1.0}, {2, 0.5}});
    const BlockOperator a = random_hermitian(ctx, rng, -2.0, 2.0);
    const BlockOperator b = a + random_hermitian(ctx, rng, -1.0, 1.0);
    const SsfProfile ab = ssf_profile(a, b);
    const SsfProfile ba = ssf_profile(b, a);
    for (double lam : {-2.5, -0.5, 0.0, 1.0, 2.5}) {
        CHECK(ssf_eval(ab, lam) == doctest::Approx(-ssf_eval(ba, lam)).epsilon(1e-12));
    }
}
