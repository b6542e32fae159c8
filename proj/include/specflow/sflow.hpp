#ifndef SPECFLOW_SFLOW_HPP
#define SPECFLOW_SFLOW_HPP

#include <string>

#include "specflow/algebra.hpp"
#include "specflow/quad.hpp"
#include "specflow/ssf.hpp"
#include "specflow/weights.hpp"

namespace specflow {

enum class SfMethod { crossing, ssf_kernel, bounded_formula, theta, summable, projection_pair };

std::string to_string(SfMethod method);

/// Spectral flow value (weighted, possibly non-integer) with the correction
/// terms the producing formula used.  For formula-based methods the
/// diagnostics reconstruct the value.
struct SpectralFlowResult {
    double value = 0.0;
    SfMethod method = SfMethod::crossing;

    struct Diagnostics {
        double xi = 0.0;            // spectral shift term
        double ker_h0 = 0.0;        // tau[ker(H0 - mu)]
        double ker_h1 = 0.0;
        double eta0 = 0.0;          // truncated eta invariants
        double eta1 = 0.0;
        double integral_term = 0.0; // the one-form / heat integral
        double gamma0 = 0.0;        // endpoint corrections
        double gamma1 = 0.0;
        double h_scale = 1.0;       // renormalization applied to h
    } diagnostics;
};

/// Exact oracle: net weighted count of eigenvalues at or above mu at the end
/// of the path minus at the start, with kernel snapping at mu.  An eigenvalue
/// moving upward through mu contributes +weight.
SpectralFlowResult sf_crossing(const BlockOperator& h0, const BlockOperator& h1, double mu);

/// xi(mu) under the half-sum convention plus the kernel corrections
/// (1/2) tau[ker(H1-mu)] - (1/2) tau[ker(H0-mu)]; equals sf_crossing.
SpectralFlowResult sf_from_ssf(const BlockOperator& h0, const BlockOperator& h1, double mu);

/// Endpoint correction gamma_h(F) = integral over r of
/// tau((Ftilde - F) h(F_r)) dr along the straight line from F to its
/// two-valued retraction Ftilde = sign_ab(F), with h(x) = af((b-x)(x-a)).
double gamma_h(const BlockOperator& f, const std::function<double(double)>& af, double a, double b,
               const QuadratureSpec& spec);

/// Bounded-picture formula: integral of h * xi_{F1,F0} over (a, b) plus
/// gamma_h(F1) - gamma_h(F0), with h = af((b-.)(.-a)) renormalized to unit
/// integral (the factor is recorded in diagnostics.h_scale).  Spectra of both
/// endpoints must lie in [a, b] up to kappa.
SpectralFlowResult sf_bounded_formula(const BlockOperator& f0, const BlockOperator& f1,
                                      const std::function<double(double)>& af, double a, double b,
                                      const QuadratureSpec& spec);

/// Spectral flow between F0 = (b-a)P + a and F1 = (b-a)Q + a:
/// C_{a,b}^{-1} integral of tau(Fdot af((b-F_r)(F_r-a))) dr with
/// C_{a,b} = integral of (b-a) af((b-a)^2 (r - r^2)) dr; equals the relative
/// index of (P, Q).
SpectralFlowResult sf_projection_pair(const ProjectionPair& pq,
                                      const std::function<double(double)>& af, double a, double b,
                                      const QuadratureSpec& spec);

/// Integral of the one-form tau(X f(H)) along the path; depends only on the
/// endpoints (the form is exact).
double one_form_integral(const PiecewisePath& path, const WeightFunction& f,
                         const QuadratureSpec& spec);

/// Potential of that one-form: the straight-line integral from h0 to h.
double theta_potential(const BlockOperator& h0, const BlockOperator& h,
                       const WeightFunction& f, const QuadratureSpec& spec);

/// Truncated eta invariant in closed form:
/// sum_j w_j sign(lambda_j) erfc(sqrt(eps) |lambda_j|) over non-kernel
/// eigenvalues.
double eta_eps(const BlockOperator& h, double eps);

/// The defining integral (1/sqrt(pi)) int_eps^T tau(H e^{-tH^2}) t^{-1/2} dt,
/// truncated where the heat factor of the smallest nonzero eigenvalue drops
/// below 1e-14.  Independent cross-check of the closed form.
double eta_eps_quadrature(const BlockOperator& h, double eps, const QuadratureSpec& spec);

/// Carey-Phillips formula at level 0:
/// sqrt(eps/pi) int tau(V e^{-eps H_r^2}) dr + (1/2)(eta_eps(H1) - eta_eps(H0))
/// + (1/2) tau([ker H1] - [ker H0]); exact for every eps > 0.
SpectralFlowResult sf_theta(const BlockOperator& h0, const BlockOperator& h1, double eps,
                            const QuadratureSpec& spec);

/// Summable formula for unitarily equivalent endpoints (checked through
/// sorted spectra; refuses otherwise):
/// C^{-1} int tau(V f(H_r - mu)) dr with C the normalization of f.
SpectralFlowResult sf_summable(const BlockOperator& h0, const BlockOperator& h1,
                               const WeightFunction& f, double mu, const QuadratureSpec& spec);

/// Path pairing of the infinitesimal spectral flow one-form:
/// int tau(Hdot_r phi(H_r)) dr.
double infinitesimal_pairing(const PiecewisePath& path, const WeightFunction& phi,
                             const QuadratureSpec& spec);

/// Other side of the pairing theorem: int sf(lambda; H0, H1) phi(lambda)
/// d lambda with sf assembled from the crossing oracle as a step function in
/// lambda and integrated exactly per step.
double sf_weighted_by(const BlockOperator& h0, const BlockOperator& h1, const WeightFunction& phi,
                      const QuadratureSpec& spec);

/// Residual |gamma_{h_eps}(F_H) - (1/2)(eta_eps(H) + tau[ker H])| with h_eps
/// from the alpha_eps family on (-1, 1).
double gamma_eta_identity_check(const BlockOperator& h, double eps, const QuadratureSpec& spec);

}  // namespace specflow

#endif
