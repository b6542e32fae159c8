#ifndef SPECFLOW_DOI_HPP
#define SPECFLOW_DOI_HPP

#include <vector>

#include "specflow/algebra.hpp"
#include "specflow/quad.hpp"
#include "specflow/weights.hpp"

namespace specflow {

/// Difference quotient (f(x) - f(y)) / (x - y); within the relative
/// coincidence threshold 1e-7 the midpoint derivative f'((x+y)/2) is used.
double divided_difference(const WeightFunction& f, double x, double y);

/// Matrix of difference quotients of f across two eigenvalue lists.
struct LoewnerMatrix {
    Eigen::MatrixXd entries;  // entries(i, j) = f^[1](left_i, right_j)
    double coincidence_threshold = 1e-7;
};

LoewnerMatrix build_loewner(const WeightFunction& f, const Eigen::VectorXd& left,
                            const Eigen::VectorXd& right);

/// Double operator integral T^{H1,H0}_{f^[1]}(V) as a Schur multiplier:
/// blockwise U1 (L .* (U1* V U0)) U0* with L the Loewner matrix over the two
/// spectra.  Exact up to eigensolver error; the production engine.
BlockOperator doi_schur(const BlockOperator& h1, const BlockOperator& h0, const BlockOperator& v,
                        const WeightFunction& f);
BlockOperator doi_schur(const EigenSystem& es1, const EigenSystem& es0, const BlockOperator& v,
                        const WeightFunction& f);

/// Discretization of the region Pi = {|s1| <= |s0|, sign s0 = sign s1}:
/// outer Gauss-Legendre in s0 on [-S, S], inner in s1 on [0, s0] (or
/// [s0, 0]).  The cutoff S is chosen so the neglected mass of |ghat| is below
/// `tail_fraction` of the total, unless set explicitly.
struct PiRegionQuadrature {
    int s0_count = 384;
    int s1_count = 96;
    double fourier_cutoff = 0.0;  // <= 0 means choose from the tail mass
    double tail_fraction = 1e-6;
    int sample_count = 1 << 14;  // dense sampling of g for its transform
};

/// Realized (s0, s1) node pairs for a given cutoff; all lie in Pi.
std::vector<std::pair<double, double>> pi_region_nodes(const PiRegionQuadrature& quad,
                                                       double cutoff);

/// Fourier transform fhat(s) = (2 pi)^{-1/2} integral f(x) e^{-isx} dx by
/// dense uniform sampling of f (midpoint rule, `samples` points over the
/// effective support).
Complex numeric_fourier(const WeightFunction& f, double s, int samples = 1 << 14);

/// Double operator integral through the BS-representation of f^[1] over Pi
/// with measure d nu_g = sgn(s0) (i / sqrt(2 pi)) ghat(s0) ds0 ds1, applied
/// to each non-negative part of the internal split f = f1 - f2 with
/// g = sqrt(f_i).  A validation engine with coarse tolerance; agreement with
/// doi_schur is the representation-independence check.
BlockOperator doi_fourier(const BlockOperator& h1, const BlockOperator& h0, const BlockOperator& v,
                          const WeightFunction& f, const PiRegionQuadrature& quad);

/// Frechet derivative of H -> f(H) in the direction x: T^{H,H}_{f^[1]}(x).
BlockOperator derivative_direction(const BlockOperator& h, const BlockOperator& x,
                                   const WeightFunction& f);

/// Integral of T^{H_r,H_r}_{f^[1]}(V_segment) dr along the path; equals
/// f(H_end) - f(H_start).
BlockOperator newton_leibnitz(const PiecewisePath& path, const WeightFunction& f,
                              const QuadratureSpec& spec);

}  // namespace specflow

#endif
