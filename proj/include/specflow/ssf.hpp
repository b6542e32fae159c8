#ifndef SPECFLOW_SSF_HPP
#define SPECFLOW_SSF_HPP

#include <vector>

#include "specflow/algebra.hpp"
#include "specflow/quad.hpp"
#include "specflow/weights.hpp"

namespace specflow {

struct SsfJump {
    double location = 0.0;
    double jump = 0.0;  // signed weighted jump
};

/// The spectral shift function as an exact right-continuous step function:
/// +w at each eigenvalue of H0, -w at each eigenvalue of H1, normalized to
/// vanish below both spectra.  Jumps coinciding within merge_kappa are
/// merged; cancelled jumps are dropped, so unitarily equivalent endpoints
/// give the empty profile.
struct SsfProfile {
    std::vector<SsfJump> jumps;  // ascending by location
    double merge_kappa = 0.0;
    bool bounded = false;  // bounded picture over (domain_lo, domain_hi)
    double domain_lo = 0.0;
    double domain_hi = 0.0;

    double total_jump() const;
};

SsfProfile ssf_profile(const BlockOperator& h0, const BlockOperator& h1);
SsfProfile ssf_profile(const EigenSystem& es0, const EigenSystem& es1);

/// Step value with the half-sum convention at jump locations (matched within
/// the profile's merge tolerance).
double ssf_eval(const SsfProfile& profile, double lam);
double ssf_eval_left(const SsfProfile& profile, double lam);
double ssf_eval_right(const SsfProfile& profile, double lam);

/// integral of antideriv' * xi over the line, evaluated exactly per step as
/// differences of the antiderivative.
double integrate_profile_antideriv(const SsfProfile& profile,
                                   const std::function<double(double)>& antideriv);

/// integral of fn * xi over [lo, hi] with per-step quadrature.
double integrate_profile_quadrature(const SsfProfile& profile,
                                    const std::function<double(double)>& fn,
                                    const QuadratureSpec& spec, double lo, double hi);

/// integral of xi over [lo, hi] (Lebesgue measure of the profile).
double profile_measure(const SsfProfile& profile, double lo, double hi);

/// Birman-Solomyak spectral shift measure Xi(Delta) = integral over r of
/// tau(V E^{H_r}_Delta) dr, with the domain split at eigenvalue crossings of
/// the interval endpoints.  Equals the profile integral over Delta.
double ssm_quadrature(const BlockOperator& h0, const BlockOperator& v, const Interval& interval,
                      const QuadratureSpec& spec);

/// integral over r of tau(V f(H_r)) dr; equals integral of f * xi d lambda.
double pairing(const BlockOperator& h0, const BlockOperator& v, const WeightFunction& f,
               const QuadratureSpec& spec);

/// |tau(f(H1) - f(H0)) - integral f' xi d lambda| with the xi-integral done
/// exactly per step (f is the antiderivative of f').
double trace_formula_residual(const BlockOperator& h0, const BlockOperator& h1,
                              const WeightFunction& f);

/// Pushes jump locations through phi(lambda) = lambda (1+lambda^2)^{-1/2},
/// preserving jump sizes; equals the profile of the pair (f_map(h0),
/// f_map(h1)) as step data.
SsfProfile invariance_map(const SsfProfile& profile);

/// |xi_{H2,H0} - xi_{H2,H1} - xi_{H1,H0}| at lam under half-sum evaluation.
double additivity_residual(const BlockOperator& h0, const BlockOperator& h1,
                           const BlockOperator& h2, double lam);

}  // namespace specflow

#endif
