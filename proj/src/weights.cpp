#include "specflow/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "specflow/quad.hpp"

namespace specflow {

namespace {

// exp(-1/(1-u^2)) on (-1, 1), zero outside.
double bump_raw(double u) {
    const double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}

double bump_raw_deriv(double u) {
    const double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    const double b = std::exp(-1.0 / q);
    if (b == 0.0) return 0.0;
    return b * (-2.0 * u) / (q * q);
}

// integral of bump_raw over [-1, 1], computed once.
double bump_mass() {
    static const double value = [] {
        QuadratureSpec spec;
        spec.tolerance = 1e-12;
        return integrate_scalar(bump_raw, spec, -1.0, 1.0).value;
    }();
    return value;
}

double alpha_eps_raw(double eps, double x) {
    // sqrt(eps/pi) x^{-3/2} e^{eps(1 - 1/x)} in log space; x <= 0 handled by
    // callers.
    const double t = eps * (1.0 - 1.0 / x) - 1.5 * std::log(x) + 0.5 * std::log(eps / M_PI);
    return std::exp(t);
}

double alpha_eps_raw_deriv(double eps, double x) {
    return alpha_eps_raw(eps, x) * (eps / (x * x) - 1.5 / x);
}

}  // namespace

WeightFunction gaussian(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("gaussian: eps must be > 0");
    WeightFunction f;
    f.name = "gaussian";
    f.eval = [eps](double x) { return std::exp(-eps * x * x); };
    f.deriv = [eps](double x) { return -2.0 * eps * x * std::exp(-eps * x * x); };
    f.antideriv = [eps](double x) { return 0.5 * std::sqrt(M_PI / eps) * std::erf(std::sqrt(eps) * x); };
    f.normalization = std::sqrt(M_PI / eps);
    f.normalization_exact = true;
    f.smoothness = kSmoothInf;
    f.schwartz_class = true;
    f.fourier = [eps](double s) {
        return Complex(std::exp(-s * s / (4.0 * eps)) / std::sqrt(2.0 * eps), 0.0);
    };
    return f;
}

WeightFunction resolvent_power(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("resolvent_power: p must be > 1 (integrability)");
    WeightFunction f;
    f.name = "resolvent_power";
    f.eval = [p](double x) { return std::pow(1.0 + x * x, -0.5 * p); };
    f.deriv = [p](double x) { return -p * x * std::pow(1.0 + x * x, -0.5 * p - 1.0); };
    if (p == 2.0) {
        f.antideriv = [](double x) { return std::atan(x); };
        f.normalization = M_PI;
    } else {
        if (p == 3.0) f.antideriv = [](double x) { return x / std::sqrt(1.0 + x * x); };
        f.normalization =
            std::sqrt(M_PI) * std::exp(std::lgamma(0.5 * (p - 1.0)) - std::lgamma(0.5 * p));
    }
    f.normalization_exact = true;
    f.smoothness = kSmoothInf;
    return f;
}

WeightFunction mollifier(double eps, double center) {
    if (!(eps > 0.0)) throw std::invalid_argument("mollifier: eps must be > 0");
    const double c = 1.0 / (eps * bump_mass());
    WeightFunction f;
    f.name = "mollifier";
    f.eval = [eps, center, c](double x) { return c * bump_raw((x - center) / eps); };
    f.deriv = [eps, center, c](double x) { return c * bump_raw_deriv((x - center) / eps) / eps; };
    f.normalization = 1.0;
    f.normalization_exact = false;  // fixed by the cached quadrature mass
    f.support_lo = center - eps;
    f.support_hi = center + eps;
    f.smoothness = kSmoothInf;
    return f;
}

AlphaEpsProfiles alpha_eps_profiles(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("alpha_eps_profiles: eps must be > 0");
    AlphaEpsProfiles out;
    out.eps = eps;
    out.alpha = [eps](double x) {
        if (!(x > 0.0)) throw std::invalid_argument("alpha_eps: argument must be > 0");
        return alpha_eps_raw(eps, x);
    };

    WeightFunction h;
    h.name = "alpha_eps_h";
    h.eval = [eps](double lam) {
        const double q = 1.0 - lam * lam;
        return q > 0.0 ? alpha_eps_raw(eps, q) : 0.0;
    };
    h.deriv = [eps](double lam) {
        const double q = 1.0 - lam * lam;
        return q > 0.0 ? alpha_eps_raw_deriv(eps, q) * (-2.0 * lam) : 0.0;
    };
    // integral of alpha_eps(1 - x^2) over (-1, 1) is 1 (substitute
    // t = (1 - x^2)^{-1}; the tail reduces to Gamma(1/2)).
    h.normalization = 1.0;
    h.normalization_exact = true;
    h.support_lo = -1.0;
    h.support_hi = 1.0;
    h.smoothness = kSmoothInf;
    out.h = std::move(h);

    WeightFunction f;
    f.name = "alpha_eps_f";
    const double amp = std::sqrt(eps / M_PI);
    f.eval = [eps, amp](double x) {
        const double t = 1.0 + x * x;
        return amp * t * std::sqrt(t) * std::exp(-eps * x * x);
    };
    f.deriv = [eps, amp](double x) {
        const double t = 1.0 + x * x;
        return amp * std::exp(-eps * x * x) * (3.0 * x * std::sqrt(t) - 2.0 * eps * x * t * std::sqrt(t));
    };
    f.smoothness = kSmoothInf;
    f.schwartz_class = true;
    f.normalization = 0.0;  // filled below
    out.f = std::move(f);
    out.f.normalization = normalization_constant(out.f);
    return out;
}

SmoothSquareSplit split_smooth_squares(const WeightFunction& f) {
    if (!f.compact_support()) {
        throw std::invalid_argument("split_smooth_squares: f must be compactly supported");
    }
    if (f.smoothness < 2) {
        throw std::invalid_argument("split_smooth_squares: f must be at least C^2");
    }
    const double lo = f.support_lo;
    const double hi = f.support_hi;
    const double width = hi - lo;
    if (!(width > 0.0)) throw std::invalid_argument("split_smooth_squares: empty support");

    // Enclosing interval with padding so the bump is bounded below on supp(f).
    const double a = lo - 0.3 * width;
    const double b = hi + 0.3 * width;
    const auto to_u = [a, b](double x) { return 2.0 * (x - a) / (b - a) - 1.0; };

    // M = 1.1 * max f_+ / bump guarantees f1 >= 1.1 f_+ >= f pointwise, so
    // f2 = f1 - f stays strictly positive inside (a, b) wherever f != 0.
    double m = 0.0;
    constexpr int kGrid = 2001;
    for (int i = 0; i < kGrid; ++i) {
        const double x = lo + width * static_cast<double>(i) / (kGrid - 1);
        const double fx = f.eval(x);
        if (fx > 0.0) m = std::max(m, fx / bump_raw(to_u(x)));
    }
    m *= 1.1;

    const double du_dx = 2.0 / (b - a);
    WeightFunction f1;
    f1.name = "split_bump";
    f1.eval = [m, to_u](double x) { return m * bump_raw(to_u(x)); };
    f1.deriv = [m, to_u, du_dx](double x) { return m * bump_raw_deriv(to_u(x)) * du_dx; };
    f1.normalization = m * 0.5 * (b - a) * bump_mass();
    f1.support_lo = a;
    f1.support_hi = b;
    f1.smoothness = kSmoothInf;

    WeightFunction f2;
    f2.name = "split_rest";
    f2.eval = [e1 = f1.eval, e = f.eval](double x) { return e1(x) - e(x); };
    f2.deriv = [d1 = f1.deriv, d = f.deriv](double x) { return d1(x) - d(x); };
    f2.support_lo = a;
    f2.support_hi = b;
    f2.smoothness = f.smoothness;
    f2.normalization = 0.0;
    SmoothSquareSplit split{std::move(f1), std::move(f2)};
    split.f2.normalization = normalization_constant(split.f2);
    return split;
}

double normalization_constant(const WeightFunction& f) {
    if (f.normalization_exact) return f.normalization;

    QuadratureSpec spec;
    spec.tolerance = 1e-11;
    if (f.compact_support()) {
        return integrate_scalar(f.eval, spec, f.support_lo, f.support_hi).value;
    }

    // Core plus dyadic shells until the tail is negligible; a shell sequence
    // that stops shrinking signals a non-integrable tail.
    double total = integrate_scalar(f.eval, spec, -1.0, 1.0).value;
    double prev_shell = std::numeric_limits<double>::infinity();
    double l = 1.0;
    for (int k = 0; k < 2000; ++k) {
        const double shell = integrate_scalar(f.eval, spec, l, 2.0 * l).value +
                             integrate_scalar(f.eval, spec, -2.0 * l, -l).value;
        total += shell;
        if (std::abs(shell) <= 1e-10 * std::max(std::abs(total), 1e-30) + 1e-300) return total;
        if (k > 4 && std::abs(shell) > 0.995 * std::abs(prev_shell)) {
            throw std::runtime_error("normalization_constant: integral appears divergent");
        }
        prev_shell = shell;
        l *= 2.0;
    }
    throw std::runtime_error("normalization_constant: tail did not converge");
}

}  // namespace specflow
