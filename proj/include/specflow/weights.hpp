#ifndef SPECFLOW_WEIGHTS_HPP
#define SPECFLOW_WEIGHTS_HPP

#include <functional>
#include <limits>
#include <string>

#include "specflow/algebra.hpp"

namespace specflow {

inline constexpr int kSmoothInf = std::numeric_limits<int>::max();

/// Scalar profile f with the metadata each trace formula needs: derivative,
/// normalization C = integral of f, support, smoothness class, and (when
/// available in closed form) antiderivative and Fourier transform.
///
/// Smoothness is metadata, not enforced symbolically; operations that require
/// a function class check it and refuse otherwise.  The Fourier convention is
/// fhat(s) = (2 pi)^{-1/2} * integral f(x) e^{-isx} dx.
struct WeightFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    std::function<double(double)> antideriv;  // empty when no closed form
    double normalization = 0.0;
    bool normalization_exact = false;
    double support_lo = -std::numeric_limits<double>::infinity();
    double support_hi = std::numeric_limits<double>::infinity();
    int smoothness = 0;  // C^k; kSmoothInf for C-infinity
    bool schwartz_class = false;
    std::function<Complex(double)> fourier;  // empty when no closed form

    bool compact_support() const {
        return std::isfinite(support_lo) && std::isfinite(support_hi);
    }
    bool has_antideriv() const { return static_cast<bool>(antideriv); }
    bool has_fourier() const { return static_cast<bool>(fourier); }
};

/// f(x) = exp(-eps x^2); C = sqrt(pi/eps), Schwartz class, closed-form
/// Fourier transform.
WeightFunction gaussian(double eps);

/// f(x) = (1 + x^2)^{-p/2}, p > 1; C = sqrt(pi) Gamma((p-1)/2) / Gamma(p/2).
WeightFunction resolvent_power(double p);

/// Even bump c exp(-1/(1-u^2)), u = (x-center)/eps, supported on
/// [center-eps, center+eps], normalized so C = 1.
WeightFunction mollifier(double eps, double center = 0.0);

/// The alpha_eps family and its two composed profiles:
/// alpha(x) = sqrt(eps/pi) x^{-3/2} exp(eps (1 - 1/x)) on (0, 1],
/// h(x) = alpha(1 - x^2) on (-1, 1)  (C = 1 exactly),
/// f(x) = alpha((1 + x^2)^{-1}) = sqrt(eps/pi) (1+x^2)^{3/2} exp(-eps x^2).
struct AlphaEpsProfiles {
    double eps = 0.0;
    std::function<double(double)> alpha;  // throws for x <= 0
    WeightFunction h;
    WeightFunction f;
};

AlphaEpsProfiles alpha_eps_profiles(double eps);

/// Splits a compactly supported C^k (k >= 2) function as f = f1 - f2 with
/// f1, f2 >= 0 and smooth square roots: f1 is a scaled bump over an enclosing
/// interval dominating f, f2 = f1 - f.
struct SmoothSquareSplit {
    WeightFunction f1;
    WeightFunction f2;
};

SmoothSquareSplit split_smooth_squares(const WeightFunction& f);

/// C = integral of f over the line: the cataloged exact value when present,
/// otherwise adaptive quadrature to 1e-10 relative.  Throws when the tail
/// fails to converge (non-integrable decay).
double normalization_constant(const WeightFunction& f);

}  // namespace specflow

#endif
