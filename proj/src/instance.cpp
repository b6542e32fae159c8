#include "specflow/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace specflow {

Matrix random_unitary(Rng& rng, Eigen::Index dim) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? (d / a) : Complex(1.0, 0.0);
    }
    return q;
}

ContextPtr random_context(Rng& rng, const RandomSpec& spec) {
    const int nblocks = rng.uniform_int(spec.min_blocks, spec.max_blocks);
    std::vector<TraceBlock> blocks;
    // Distribute a total dimension over the blocks, one minimum each.
    const int total = rng.uniform_int(std::max(spec.min_total_dim, nblocks), spec.max_total_dim);
    int remaining = total - nblocks;
    for (int k = 0; k < nblocks; ++k) {
        int extra = 0;
        if (remaining > 0) {
            extra = (k + 1 == nblocks) ? remaining : rng.uniform_int(0, remaining);
            remaining -= extra;
        }
        blocks.push_back({1 + extra, rng.uniform(spec.weight_lo, spec.weight_hi)});
    }
    return make_context(std::move(blocks));
}

BlockOperator random_hermitian(const ContextPtr& ctx, Rng& rng, double lo, double hi) {
    std::vector<Eigen::VectorXd> spectra;
    for (const auto& b : ctx->blocks()) {
        Eigen::VectorXd lam(b.dim);
        for (Eigen::Index i = 0; i < b.dim; ++i) lam[i] = rng.uniform(lo, hi);
        spectra.push_back(std::move(lam));
    }
    return hermitian_with_spectrum(ctx, rng, spectra);
}

BlockOperator hermitian_with_spectrum(const ContextPtr& ctx, Rng& rng,
                                      const std::vector<Eigen::VectorXd>& spectra) {
    if (static_cast<int>(spectra.size()) != ctx->block_count()) {
        throw std::invalid_argument("hermitian_with_spectrum: spectra count mismatch");
    }
    std::vector<Matrix> blocks;
    for (int k = 0; k < ctx->block_count(); ++k) {
        const Eigen::Index dim = ctx->blocks()[static_cast<size_t>(k)].dim;
        const Matrix u = random_unitary(rng, dim);
        Matrix m = u * spectra[static_cast<size_t>(k)].cast<Complex>().asDiagonal() * u.adjoint();
        blocks.push_back(0.5 * (m + m.adjoint()));
    }
    return BlockOperator(ctx, std::move(blocks));
}

BlockOperator random_projection(const ContextPtr& ctx, Rng& rng) {
    std::vector<Matrix> blocks;
    for (const auto& b : ctx->blocks()) {
        const int rank = rng.uniform_int(0, static_cast<int>(b.dim));
        const Matrix u = random_unitary(rng, b.dim);
        const Matrix cols = u.leftCols(rank);
        blocks.push_back(cols * cols.adjoint());
    }
    return BlockOperator(ctx, std::move(blocks));
}

BlockOperator gauge_transform(const BlockOperator& h, Rng& rng) {
    std::vector<Matrix> blocks;
    for (int k = 0; k < h.block_count(); ++k) {
        const Matrix u = random_unitary(rng, h.block(k).rows());
        Matrix m = u * h.block(k) * u.adjoint();
        blocks.push_back(0.5 * (m + m.adjoint()));
    }
    return BlockOperator(h.context(), std::move(blocks));
}

std::pair<BlockOperator, BlockOperator> lattice_shift(int n) {
    if (n < 1) throw std::invalid_argument("lattice_shift: n must be >= 1");
    const Eigen::Index dim = 2 * n + 1;
    const ContextPtr ctx = make_simple_context(dim);
    Eigen::VectorXd lam(dim);
    for (Eigen::Index i = 0; i < dim; ++i) lam[i] = static_cast<double>(i) - n;
    const BlockOperator h0 = BlockOperator::diagonal(ctx, {lam});
    return {h0, h0 + BlockOperator::identity(ctx)};
}

}  // namespace specflow
