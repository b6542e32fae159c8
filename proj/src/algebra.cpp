#include "specflow/algebra.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace specflow {

namespace {

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

}  // namespace

TraceContext::TraceContext(std::vector<TraceBlock> blocks) : blocks_(std::move(blocks)) {
    require(!blocks_.empty(), "TraceContext: at least one block required");
    for (const auto& b : blocks_) {
        require(b.dim >= 1, "TraceContext: block dimension must be positive");
        require(b.weight > 0.0 && std::isfinite(b.weight),
                "TraceContext: block weight must be positive and finite");
        total_dim_ += b.dim;
        total_weight_ += b.weight * static_cast<double>(b.dim);
    }
}

bool TraceContext::operator==(const TraceContext& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].dim != other.blocks_[k].dim) return false;
        if (blocks_[k].weight != other.blocks_[k].weight) return false;
    }
    return true;
}

ContextPtr make_context(std::vector<TraceBlock> blocks) {
    return std::make_shared<const TraceContext>(std::move(blocks));
}

ContextPtr make_simple_context(Eigen::Index n, double weight) {
    return make_context({TraceBlock{n, weight}});
}

BlockOperator::BlockOperator(ContextPtr context, std::vector<Matrix> blocks)
    : context_(std::move(context)), blocks_(std::move(blocks)) {
    require(context_ != nullptr, "BlockOperator: null context");
    require(static_cast<int>(blocks_.size()) == context_->block_count(),
            "BlockOperator: block count does not match context");
    for (int k = 0; k < context_->block_count(); ++k) {
        const auto dim = context_->blocks()[static_cast<size_t>(k)].dim;
        const auto& m = blocks_[static_cast<size_t>(k)];
        if (m.rows() != dim || m.cols() != dim) {
            std::ostringstream os;
            os << "BlockOperator: block " << k << " is " << m.rows() << "x" << m.cols()
               << ", context expects " << dim << "x" << dim;
            throw std::invalid_argument(os.str());
        }
    }
}

BlockOperator BlockOperator::zeros(const ContextPtr& context) {
    std::vector<Matrix> blocks;
    for (const auto& b : context->blocks()) blocks.push_back(Matrix::Zero(b.dim, b.dim));
    return BlockOperator(context, std::move(blocks));
}

BlockOperator BlockOperator::identity(const ContextPtr& context) {
    std::vector<Matrix> blocks;
    for (const auto& b : context->blocks()) blocks.push_back(Matrix::Identity(b.dim, b.dim));
    return BlockOperator(context, std::move(blocks));
}

BlockOperator BlockOperator::self_adjoint(ContextPtr context, std::vector<Matrix> blocks) {
    BlockOperator a(std::move(context), std::move(blocks));
    const double tol = 1e-12 * (1.0 + a.max_abs());
    require(a.is_hermitian(tol), "self_adjoint: input exceeds Hermiticity tolerance");
    a.hermitize();
    return a;
}

BlockOperator BlockOperator::diagonal(ContextPtr context, const std::vector<Eigen::VectorXd>& values) {
    require(static_cast<int>(values.size()) == context->block_count(),
            "diagonal: value list count does not match context");
    std::vector<Matrix> blocks;
    for (int k = 0; k < context->block_count(); ++k) {
        const auto dim = context->blocks()[static_cast<size_t>(k)].dim;
        require(values[static_cast<size_t>(k)].size() == dim, "diagonal: value list length mismatch");
        blocks.push_back(values[static_cast<size_t>(k)].cast<Complex>().asDiagonal());
    }
    return BlockOperator(std::move(context), std::move(blocks));
}

BlockOperator BlockOperator::adjoint() const {
    std::vector<Matrix> blocks;
    blocks.reserve(blocks_.size());
    for (const auto& m : blocks_) blocks.push_back(m.adjoint());
    return BlockOperator(context_, std::move(blocks));
}

bool BlockOperator::is_hermitian(double tol) const {
    for (const auto& m : blocks_) {
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

void BlockOperator::hermitize() {
    for (auto& m : blocks_) m = 0.5 * (m + m.adjoint()).eval();
}

double BlockOperator::op_norm() const {
    double n = 0.0;
    for (const auto& m : blocks_) {
        if (m.rows() == 0) continue;
        n = std::max(n, m.operatorNorm());
    }
    return n;
}

double BlockOperator::frob_norm() const {
    double s = 0.0;
    for (const auto& m : blocks_) s += m.squaredNorm();
    return std::sqrt(s);
}

double BlockOperator::max_abs() const {
    double s = 0.0;
    for (const auto& m : blocks_) {
        if (m.size() > 0) s = std::max(s, m.cwiseAbs().maxCoeff());
    }
    return s;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& rhs) {
    require(same_context(*this, rhs), "BlockOperator: context mismatch in +");
    for (size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += rhs.blocks_[k];
    return *this;
}

BlockOperator& BlockOperator::operator-=(const BlockOperator& rhs) {
    require(same_context(*this, rhs), "BlockOperator: context mismatch in -");
    for (size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= rhs.blocks_[k];
    return *this;
}

BlockOperator& BlockOperator::operator*=(Complex s) {
    for (auto& m : blocks_) m *= s;
    return *this;
}

BlockOperator operator+(BlockOperator a, const BlockOperator& b) { return a += b; }
BlockOperator operator-(BlockOperator a, const BlockOperator& b) { return a -= b; }
BlockOperator operator-(BlockOperator a) { return a *= Complex(-1.0, 0.0); }
BlockOperator operator*(Complex s, BlockOperator a) { return a *= s; }
BlockOperator operator*(double s, BlockOperator a) { return a *= Complex(s, 0.0); }

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
    if (!same_context(a, b)) throw std::invalid_argument("BlockOperator: context mismatch in *");
    std::vector<Matrix> blocks;
    blocks.reserve(a.blocks().size());
    for (int k = 0; k < a.block_count(); ++k) blocks.push_back(a.block(k) * b.block(k));
    return BlockOperator(a.context(), std::move(blocks));
}

bool same_context(const BlockOperator& a, const BlockOperator& b) {
    if (a.context() == b.context()) return true;
    return *a.context() == *b.context();
}

Complex weighted_trace(const BlockOperator& a) {
    Complex s(0.0, 0.0);
    for (int k = 0; k < a.block_count(); ++k) {
        s += a.context()->blocks()[static_cast<size_t>(k)].weight * a.block(k).trace();
    }
    return s;
}

double real_trace(const BlockOperator& a) {
    const Complex t = weighted_trace(a);
    const double scale = 1.0 + std::abs(t.real());
    if (std::abs(t.imag()) > 1e-9 * scale) {
        throw std::runtime_error("real_trace: trace has a non-negligible imaginary part");
    }
    return t.real();
}

double kappa(const BlockOperator& h) { return 1e-9 * (1.0 + h.op_norm()); }

double pair_kappa(const BlockOperator& a, const BlockOperator& b) {
    return 1e-9 * (1.0 + std::max(a.op_norm(), b.op_norm()));
}

BlockOperator EigenSystem::apply(const std::function<double(double)>& f) const {
    std::vector<Matrix> blocks;
    blocks.reserve(values.size());
    for (size_t k = 0; k < values.size(); ++k) {
        const auto& lam = values[k];
        Eigen::VectorXd flam(lam.size());
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            const double y = f(lam[i]);
            if (!std::isfinite(y)) {
                std::ostringstream os;
                os << "matrix_function: f is not finite at eigenvalue " << lam[i];
                throw std::invalid_argument(os.str());
            }
            flam[i] = y;
        }
        const Matrix& u = vectors[k];
        blocks.push_back(u * flam.cast<Complex>().asDiagonal() * u.adjoint());
    }
    return BlockOperator(context, std::move(blocks));
}

double EigenSystem::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : values)
        if (v.size() > 0) m = std::min(m, v.minCoeff());
    return m;
}

double EigenSystem::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : values)
        if (v.size() > 0) m = std::max(m, v.maxCoeff());
    return m;
}

double EigenSystem::op_norm() const {
    double m = 0.0;
    for (const auto& v : values)
        if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
    return m;
}

std::vector<std::pair<double, double>> EigenSystem::sorted_values() const {
    std::vector<std::pair<double, double>> out;
    for (size_t k = 0; k < values.size(); ++k) {
        const double w = context->blocks()[k].weight;
        for (Eigen::Index i = 0; i < values[k].size(); ++i) out.emplace_back(values[k][i], w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

EigenSystem eigendecompose(const BlockOperator& h) {
    const double tol = 1e-12 * (1.0 + h.max_abs());
    if (!h.is_hermitian(tol)) {
        throw std::invalid_argument("eigendecompose: input is not Hermitian within tolerance");
    }
    EigenSystem es;
    es.context = h.context();
    for (int k = 0; k < h.block_count(); ++k) {
        Matrix m = 0.5 * (h.block(k) + h.block(k).adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("eigendecompose: eigensolver failed to converge");
        }
        es.values.push_back(solver.eigenvalues());
        es.vectors.push_back(solver.eigenvectors());
    }
    return es;
}

double count_geq(const EigenSystem& es, double mu, double kap) {
    double s = 0.0;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            if (es.values[k][i] >= mu - kap) s += w;
        }
    }
    return s;
}

double count_leq(const EigenSystem& es, double mu, double kap) {
    double s = 0.0;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            if (es.values[k][i] <= mu + kap) s += w;
        }
    }
    return s;
}

double kernel_trace(const EigenSystem& es, double mu, double kap) {
    double s = 0.0;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            if (std::abs(es.values[k][i] - mu) <= kap) s += w;
        }
    }
    return s;
}

Interval Interval::whole_line() {
    Interval iv;
    iv.lo = -std::numeric_limits<double>::infinity();
    iv.hi = std::numeric_limits<double>::infinity();
    iv.closed_lo = false;
    iv.closed_hi = false;
    return iv;
}

bool interval_contains(const Interval& iv, double lambda, double kap) {
    const bool above = iv.closed_lo ? (lambda >= iv.lo - kap) : (lambda > iv.lo);
    const bool below = iv.closed_hi ? (lambda <= iv.hi + kap) : (lambda < iv.hi);
    return above && below;
}

BlockOperator matrix_function(const BlockOperator& h, const std::function<double(double)>& f) {
    return eigendecompose(h).apply(f);
}

BlockOperator matrix_function(const EigenSystem& es, const std::function<double(double)>& f) {
    return es.apply(f);
}

BlockOperator spectral_projection(const EigenSystem& es, const Interval& iv) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("spectral_projection: invalid interval");
    const double kap = 1e-9 * (1.0 + es.op_norm());
    std::vector<Matrix> blocks;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const auto& lam = es.values[k];
        Eigen::VectorXd ind(lam.size());
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            ind[i] = interval_contains(iv, lam[i], kap) ? 1.0 : 0.0;
        }
        const Matrix& u = es.vectors[k];
        blocks.push_back(u * ind.cast<Complex>().asDiagonal() * u.adjoint());
    }
    return BlockOperator(es.context, std::move(blocks));
}

BlockOperator spectral_projection(const BlockOperator& h, const Interval& iv) {
    return spectral_projection(eigendecompose(h), iv);
}

Complex trace_against_spectral_measure(const BlockOperator& v, const EigenSystem& es,
                                       const std::function<double(double)>& alpha) {
    if (!(*v.context() == *es.context)) {
        throw std::invalid_argument("trace_against_spectral_measure: context mismatch");
    }
    Complex s(0.0, 0.0);
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        const Matrix& u = es.vectors[k];
        // tau(V P_i) = w * <u_i| V |u_i> per eigenvector.
        const Matrix vu = v.block(static_cast<int>(k)) * u;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            s += w * alpha(es.values[k][i]) * u.col(i).dot(vu.col(i));
        }
    }
    return s;
}

Complex trace_against_spectral_measure(const BlockOperator& v, const BlockOperator& h,
                                       const std::function<double(double)>& alpha) {
    if (!same_context(v, h)) {
        throw std::invalid_argument("trace_against_spectral_measure: context mismatch");
    }
    return trace_against_spectral_measure(v, eigendecompose(h), alpha);
}

BlockOperator sign_ab(const BlockOperator& f, double a, double b) {
    const EigenSystem es = eigendecompose(f);
    const double kap = 1e-9 * (1.0 + es.op_norm());
    return es.apply([a, b, kap](double x) {
        const double snapped = (std::abs(x) <= kap) ? 0.0 : x;
        return snapped >= 0.0 ? b : a;
    });
}

double phi_map(double lambda) { return lambda / std::sqrt(1.0 + lambda * lambda); }

double phi_map_deriv(double lambda) {
    const double t = 1.0 + lambda * lambda;
    return 1.0 / (t * std::sqrt(t));
}

BlockOperator f_map(const BlockOperator& h) {
    return matrix_function(h, [](double x) { return phi_map(x); });
}

ProjectionPair::ProjectionPair(BlockOperator p_in, BlockOperator q_in)
    : p(std::move(p_in)), q(std::move(q_in)) {
    if (!same_context(p, q)) throw std::invalid_argument("ProjectionPair: context mismatch");
    for (const BlockOperator* pr : {&p, &q}) {
        const double tol = 1e-10 * (1.0 + pr->op_norm());
        if (!pr->is_hermitian(tol)) throw std::invalid_argument("ProjectionPair: not Hermitian");
        if (((*pr) * (*pr) - (*pr)).op_norm() > 1e-10 * (1.0 + pr->op_norm())) {
            throw std::invalid_argument("ProjectionPair: not idempotent");
        }
    }
}

double relative_index(const ProjectionPair& pq) {
    const BlockOperator d = pq.q - pq.p;
    const EigenSystem es = eigendecompose(d);
    const double kap = 1e-9 * (1.0 + es.op_norm());
    double plus = 0.0;
    double minus = 0.0;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            const double lam = es.values[k][i];
            if (std::abs(lam - 1.0) <= kap) plus += w;
            if (std::abs(lam + 1.0) <= kap) minus += w;
        }
    }
    return plus - minus;
}

ResolventBoundResult resolvent_bound_check(const BlockOperator& h0, const BlockOperator& a) {
    if (!same_context(h0, a)) throw std::invalid_argument("resolvent_bound_check: context mismatch");
    const double na = a.op_norm();
    const double bound = 1.0 + 0.5 * na * na + 0.5 * na * std::sqrt(na * na + 4.0);
    const auto inv_res = [](double x) { return 1.0 / (1.0 + x * x); };
    const BlockOperator lhs = bound * matrix_function(h0, inv_res);
    const BlockOperator rhs = matrix_function(h0 + a, inv_res);
    const EigenSystem es = eigendecompose(lhs - rhs);
    ResolventBoundResult res;
    res.margin = es.min_value();
    res.ok = res.margin >= -1e-10;
    return res;
}

}  // namespace specflow
