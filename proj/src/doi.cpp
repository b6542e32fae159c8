#include "specflow/doi.hpp"

#include <cmath>
#include <stdexcept>

namespace specflow {

double divided_difference(const WeightFunction& f, double x, double y) {
    constexpr double kDelta = 1e-7;
    if (std::abs(x - y) > kDelta * (1.0 + std::max(std::abs(x), std::abs(y)))) {
        return (f.eval(x) - f.eval(y)) / (x - y);
    }
    return f.deriv(0.5 * (x + y));
}

LoewnerMatrix build_loewner(const WeightFunction& f, const Eigen::VectorXd& left,
                            const Eigen::VectorXd& right) {
    LoewnerMatrix lm;
    lm.entries.resize(left.size(), right.size());
    for (Eigen::Index i = 0; i < left.size(); ++i) {
        for (Eigen::Index j = 0; j < right.size(); ++j) {
            lm.entries(i, j) = divided_difference(f, left[i], right[j]);
        }
    }
    return lm;
}

BlockOperator doi_schur(const EigenSystem& es1, const EigenSystem& es0, const BlockOperator& v,
                        const WeightFunction& f) {
    if (!(*es1.context == *es0.context) || !(*es1.context == *v.context())) {
        throw std::invalid_argument("doi_schur: context mismatch");
    }
    std::vector<Matrix> blocks;
    for (int k = 0; k < v.block_count(); ++k) {
        const Matrix& u1 = es1.vectors[static_cast<size_t>(k)];
        const Matrix& u0 = es0.vectors[static_cast<size_t>(k)];
        const LoewnerMatrix lm =
            build_loewner(f, es1.values[static_cast<size_t>(k)], es0.values[static_cast<size_t>(k)]);
        const Matrix vt = u1.adjoint() * v.block(k) * u0;
        blocks.push_back(u1 * lm.entries.cast<Complex>().cwiseProduct(vt) * u0.adjoint());
    }
    return BlockOperator(v.context(), std::move(blocks));
}

BlockOperator doi_schur(const BlockOperator& h1, const BlockOperator& h0, const BlockOperator& v,
                        const WeightFunction& f) {
    return doi_schur(eigendecompose(h1), eigendecompose(h0), v, f);
}

namespace {

// Dense midpoint sampling of a scalar function, exposing its Fourier
// transform at arbitrary frequencies.
struct SampledTransform {
    std::vector<double> values;
    double x0 = 0.0;
    double dx = 0.0;

    Complex operator()(double s) const {
        Complex acc(0.0, 0.0);
        for (size_t j = 0; j < values.size(); ++j) {
            if (values[j] == 0.0) continue;
            acc += values[j] * std::polar(1.0, -s * (x0 + (static_cast<double>(j) + 0.5) * dx));
        }
        return acc * (dx / std::sqrt(2.0 * M_PI));
    }
};

double effective_radius(const WeightFunction& f) {
    if (f.compact_support()) {
        return std::max(std::abs(f.support_lo), std::abs(f.support_hi));
    }
    double peak = std::abs(f.eval(0.0));
    for (double x = 0.25; x <= 4.0; x *= 2.0) peak = std::max(peak, std::abs(f.eval(x)));
    double l = 1.0;
    while (l < 1e6 && std::abs(f.eval(l)) + std::abs(f.eval(-l)) > 1e-18 * std::max(peak, 1e-30)) {
        l *= 2.0;
    }
    return l;
}

SampledTransform sample_function(const std::function<double(double)>& fn, double lo, double hi,
                                 int samples) {
    SampledTransform st;
    st.x0 = lo;
    st.dx = (hi - lo) / samples;
    st.values.resize(static_cast<size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        st.values[static_cast<size_t>(j)] = fn(lo + (j + 0.5) * st.dx);
    }
    return st;
}

// Smallest S with the two-sided tail of |ghat| below `fraction` of its mass.
double auto_cutoff(const SampledTransform& ghat, double fraction) {
    constexpr double kStep = 0.5;
    constexpr double kMax = 400.0;
    std::vector<double> mags;
    double total = 0.5 * std::abs(ghat(0.0));
    for (double s = kStep; s <= kMax; s += kStep) {
        mags.push_back(std::abs(ghat(s)));
        total += mags.back();
    }
    double tail = 0.0;
    for (size_t i = mags.size(); i-- > 0;) {
        tail += mags[i];
        if (tail > 0.5 * fraction * total) {
            return std::min(kMax, kStep * (static_cast<double>(i) + 2.0));
        }
    }
    return kStep;
}

// One Pi-region integral for a non-negative part with g = sqrt(f_part).
// Accumulates the symbol psi(x, y) = int_Pi e^{i(s0-s1)x} e^{i s1 y}
// (g(x) + g(y)) d nu_g per eigenvalue pair, then maps back through the
// eigenbases; this is the node-by-node BS integral with its operator factors
// expressed in the (fixed) eigenbases of H1 and H0.
BlockOperator pi_integral(const EigenSystem& es1, const EigenSystem& es0, const BlockOperator& v,
                          const WeightFunction& f_part, const PiRegionQuadrature& quad) {
    const auto g_eval = [&f_part](double x) { return std::sqrt(std::max(f_part.eval(x), 0.0)); };
    const SampledTransform ghat =
        sample_function(g_eval, f_part.support_lo, f_part.support_hi, quad.sample_count);

    // The cutoff honors the tail-mass rule only as far as the node counts can
    // resolve the phases: the outer integrand oscillates at frequency up to
    // S * (|lambda|_max + support radius) and the inner at S * |lambda|_max,
    // and a Gauss-Legendre rule of order n resolves about 2n radians across
    // its interval.  Truncating earlier trades a documented tail error for
    // an otherwise divergent discretization.
    const double lam_max = std::max(es1.op_norm(), es0.op_norm());
    const double radius =
        std::max(std::abs(f_part.support_lo), std::abs(f_part.support_hi));
    const double resolve_cap =
        1.2 * std::min(quad.s0_count / std::max(lam_max + radius, 1e-6),
                       quad.s1_count / std::max(lam_max, 1e-6));
    const double cutoff = quad.fourier_cutoff > 0.0
                              ? quad.fourier_cutoff
                              : std::min(auto_cutoff(ghat, quad.tail_fraction), resolve_cap);

    const auto& rule_s0 = gauss_legendre_rule(quad.s0_count);
    const auto& rule_s1 = gauss_legendre_rule(quad.s1_count);

    std::vector<Matrix> blocks;
    for (int k = 0; k < v.block_count(); ++k) {
        const Matrix& u1 = es1.vectors[static_cast<size_t>(k)];
        const Matrix& u0 = es0.vectors[static_cast<size_t>(k)];
        const Eigen::VectorXd& lam1 = es1.values[static_cast<size_t>(k)];
        const Eigen::VectorXd& lam0 = es0.values[static_cast<size_t>(k)];
        const Eigen::Index d1 = lam1.size();
        const Eigen::Index d0 = lam0.size();

        Eigen::VectorXcd g1(d1), g0(d0);
        for (Eigen::Index i = 0; i < d1; ++i) g1[i] = g_eval(lam1[i]);
        for (Eigen::Index j = 0; j < d0; ++j) g0[j] = g_eval(lam0[j]);

        Matrix psi = Matrix::Zero(d1, d0);
        Eigen::VectorXcd a(d1), b(d0);
        for (const auto& [x0, w0] : rule_s0) {
            const double s0 = cutoff * x0;  // node on [-S, S]
            const Complex measure = Complex(0.0, 1.0) / std::sqrt(2.0 * M_PI) *
                                    (s0 >= 0.0 ? 1.0 : -1.0) * ghat(s0) * (cutoff * w0);
            for (const auto& [x1, w1] : rule_s1) {
                const double s1 = s0 * 0.5 * (x1 + 1.0);  // node on [0, s0] or [s0, 0]
                const double w = 0.5 * std::abs(s0) * w1;
                for (Eigen::Index i = 0; i < d1; ++i) a[i] = std::polar(1.0, (s0 - s1) * lam1[i]);
                for (Eigen::Index j = 0; j < d0; ++j) b[j] = std::polar(1.0, s1 * lam0[j]);
                const Complex c = measure * w;
                psi.noalias() += c * (a.cwiseProduct(g1)) * b.transpose();
                psi.noalias() += c * a * (b.cwiseProduct(g0)).transpose();
            }
        }

        const Matrix vt = u1.adjoint() * v.block(k) * u0;
        blocks.push_back(u1 * psi.cwiseProduct(vt) * u0.adjoint());
    }
    return BlockOperator(v.context(), std::move(blocks));
}

}  // namespace

std::vector<std::pair<double, double>> pi_region_nodes(const PiRegionQuadrature& quad,
                                                       double cutoff) {
    std::vector<std::pair<double, double>> nodes;
    for (const auto& [x0, w0] : gauss_legendre_rule(quad.s0_count)) {
        const double s0 = cutoff * x0;
        for (const auto& [x1, w1] : gauss_legendre_rule(quad.s1_count)) {
            nodes.emplace_back(s0, s0 * 0.5 * (x1 + 1.0));
        }
    }
    return nodes;
}

Complex numeric_fourier(const WeightFunction& f, double s, int samples) {
    const double r = effective_radius(f);
    const double lo = f.compact_support() ? f.support_lo : -r;
    const double hi = f.compact_support() ? f.support_hi : r;
    return sample_function(f.eval, lo, hi, samples)(s);
}

BlockOperator doi_fourier(const BlockOperator& h1, const BlockOperator& h0, const BlockOperator& v,
                          const WeightFunction& f, const PiRegionQuadrature& quad) {
    if (!same_context(h1, h0) || !same_context(h1, v)) {
        throw std::invalid_argument("doi_fourier: context mismatch");
    }
    if (!f.compact_support() || f.smoothness < 2) {
        throw std::invalid_argument(
            "doi_fourier: f must be compactly supported and at least C^2");
    }
    const SmoothSquareSplit split = split_smooth_squares(f);
    const EigenSystem es1 = eigendecompose(h1);
    const EigenSystem es0 = eigendecompose(h0);
    return pi_integral(es1, es0, v, split.f1, quad) - pi_integral(es1, es0, v, split.f2, quad);
}

BlockOperator derivative_direction(const BlockOperator& h, const BlockOperator& x,
                                   const WeightFunction& f) {
    const EigenSystem es = eigendecompose(h);
    return doi_schur(es, es, x, f);
}

BlockOperator newton_leibnitz(const PiecewisePath& path, const WeightFunction& f,
                              const QuadratureSpec& spec) {
    BlockOperator total = BlockOperator::zeros(path.context());
    for (int seg = 0; seg < path.segment_count(); ++seg) {
        const BlockOperator v = path.direction(seg);
        total += integrate_operator(
            [&](double t) {
                const EigenSystem es = eigendecompose(path.at_local(seg, t));
                return doi_schur(es, es, v, f);
            },
            spec, 0.0, 1.0);
    }
    return total;
}

}  // namespace specflow
