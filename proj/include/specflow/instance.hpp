#ifndef SPECFLOW_INSTANCE_HPP
#define SPECFLOW_INSTANCE_HPP

#include <cstdint>
#include <random>

#include "specflow/algebra.hpp"

namespace specflow {

/// Deterministic random source.  Distributions are derived from the raw
/// mt19937_64 stream by hand (Box-Muller for normals) so a fixed seed gives
/// identical bytes on every standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t raw() { return gen_(); }
    /// Uniform in (0, 1].
    double uniform01() { return (static_cast<double>(raw() >> 11) + 1.0) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(raw() % static_cast<uint64_t>(hi - lo + 1));
    }
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    Complex cnormal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

private:
    std::mt19937_64 gen_;
};

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix
/// with the R-diagonal phase fixed.
Matrix random_unitary(Rng& rng, Eigen::Index dim);

/// Shape parameters for random instances.
struct RandomSpec {
    int min_blocks = 2;
    int max_blocks = 3;
    int min_total_dim = 2;
    int max_total_dim = 12;
    double weight_lo = 0.25;
    double weight_hi = 2.0;
    double spectrum_lo = -2.5;
    double spectrum_hi = 2.5;
};

ContextPtr random_context(Rng& rng, const RandomSpec& spec = {});

/// Random Hermitian with eigenvalues drawn uniformly in [lo, hi], conjugated
/// by a random unitary per block.
BlockOperator random_hermitian(const ContextPtr& ctx, Rng& rng, double lo, double hi);
/// Same with prescribed per-block spectra.
BlockOperator hermitian_with_spectrum(const ContextPtr& ctx, Rng& rng,
                                      const std::vector<Eigen::VectorXd>& spectra);
/// Random orthogonal projection of random rank per block.
BlockOperator random_projection(const ContextPtr& ctx, Rng& rng);
/// u h u* for a random unitary u.
BlockOperator gauge_transform(const BlockOperator& h, Rng& rng);

/// Truncated lattice pair: h0 = diag(-n..n) with unit weight, h1 = h0 + 1,
/// emulating a gauge shift with nonzero constant spectral shift in the bulk.
std::pair<BlockOperator, BlockOperator> lattice_shift(int n);

}  // namespace specflow

#endif
