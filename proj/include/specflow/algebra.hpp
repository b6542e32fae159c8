#ifndef SPECFLOW_ALGEBRA_HPP
#define SPECFLOW_ALGEBRA_HPP

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace specflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// One summand of the block algebra: a full matrix factor with a trace weight.
struct TraceBlock {
    Eigen::Index dim = 0;
    double weight = 1.0;
};

/// Block structure and positive weights defining the trace
/// tau(A) = sum_k weight_k * Tr(A_k).  Immutable after construction.
class TraceContext {
public:
    explicit TraceContext(std::vector<TraceBlock> blocks);

    const std::vector<TraceBlock>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    Eigen::Index total_dim() const { return total_dim_; }
    double total_weight() const { return total_weight_; }  // tau(1)

    bool operator==(const TraceContext& other) const;

private:
    std::vector<TraceBlock> blocks_;
    Eigen::Index total_dim_ = 0;
    double total_weight_ = 0.0;
};

using ContextPtr = std::shared_ptr<const TraceContext>;

ContextPtr make_context(std::vector<TraceBlock> blocks);
/// Single block of dimension n with unit weight.
ContextPtr make_simple_context(Eigen::Index n, double weight = 1.0);

/// Block-diagonal complex matrix over a TraceContext.  Value type; all
/// arithmetic is blockwise.
class BlockOperator {
public:
    BlockOperator(ContextPtr context, std::vector<Matrix> blocks);

    static BlockOperator zeros(const ContextPtr& context);
    static BlockOperator identity(const ContextPtr& context);
    /// Checks near-Hermiticity (tol 1e-12 * (1 + max |entry|)) and
    /// symmetrizes (A + A*)/2.
    static BlockOperator self_adjoint(ContextPtr context, std::vector<Matrix> blocks);
    /// Real diagonal blocks from per-block value lists.
    static BlockOperator diagonal(ContextPtr context, const std::vector<Eigen::VectorXd>& values);

    const ContextPtr& context() const { return context_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const Matrix& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
    Matrix& block(int k) { return blocks_[static_cast<size_t>(k)]; }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    BlockOperator adjoint() const;
    bool is_hermitian(double tol) const;
    void hermitize();  // A <- (A + A*)/2

    double op_norm() const;   // largest singular value over blocks
    double frob_norm() const;
    double max_abs() const;

    BlockOperator& operator+=(const BlockOperator& rhs);
    BlockOperator& operator-=(const BlockOperator& rhs);
    BlockOperator& operator*=(Complex s);

private:
    ContextPtr context_;
    std::vector<Matrix> blocks_;
};

BlockOperator operator+(BlockOperator a, const BlockOperator& b);
BlockOperator operator-(BlockOperator a, const BlockOperator& b);
BlockOperator operator-(BlockOperator a);
BlockOperator operator*(Complex s, BlockOperator a);
BlockOperator operator*(double s, BlockOperator a);
BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);

/// True when the two operators live over equal block structures (compared by
/// value, so JSON-loaded operators interoperate).
bool same_context(const BlockOperator& a, const BlockOperator& b);

/// tau(A).  Complex in general, real for Hermitian input.
Complex weighted_trace(const BlockOperator& a);
/// tau(A) for operators known to have real trace (Hermitian, or a product of
/// two Hermitians); checks the imaginary part is negligible.
double real_trace(const BlockOperator& a);

/// Kernel tolerance kappa = 1e-9 * (1 + |H|_op).  Eigenvalues within kappa of
/// a reference level are treated as sitting at it.
double kappa(const BlockOperator& h);
double pair_kappa(const BlockOperator& a, const BlockOperator& b);

/// Per-block spectral resolution of a Hermitian operator.  Eigenvalues are
/// ascending within each block; eigenvector matrices are unitary.
struct EigenSystem {
    ContextPtr context;
    std::vector<Eigen::VectorXd> values;
    std::vector<Matrix> vectors;

    /// U f(Lambda) U* blockwise; throws if f is non-finite at an eigenvalue.
    BlockOperator apply(const std::function<double(double)>& f) const;
    double min_value() const;
    double max_value() const;
    double op_norm() const;  // max |eigenvalue|
    /// All (eigenvalue, weight) pairs, ascending by eigenvalue.
    std::vector<std::pair<double, double>> sorted_values() const;
};

EigenSystem eigendecompose(const BlockOperator& h);

/// Weighted eigenvalue counts with kappa-grace at the closed end.
double count_geq(const EigenSystem& es, double mu, double kap);   // tau E_[mu,inf)
double count_leq(const EigenSystem& es, double mu, double kap);   // tau E_(-inf,mu]
double kernel_trace(const EigenSystem& es, double mu, double kap);  // tau [ker(H - mu)]

/// Spectral window with explicit endpoint flags.  Counting functions default
/// to half-open (lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_lo = false;
    bool closed_hi = true;

    static Interval whole_line();
};

/// Endpoint membership: plain comparison, except eigenvalues within kappa of a
/// closed endpoint are pulled in.  Open endpoints get no grace, so tiny
/// intervals strictly containing a point keep it.
bool interval_contains(const Interval& iv, double lambda, double kap);

BlockOperator matrix_function(const BlockOperator& h, const std::function<double(double)>& f);
BlockOperator matrix_function(const EigenSystem& es, const std::function<double(double)>& f);

BlockOperator spectral_projection(const BlockOperator& h, const Interval& iv);
BlockOperator spectral_projection(const EigenSystem& es, const Interval& iv);

/// tau(V alpha(H)) evaluated against the spectral measure of H:
/// sum_i alpha(lambda_i) tau(V P_i) over eigenprojections P_i.
Complex trace_against_spectral_measure(const BlockOperator& v, const BlockOperator& h,
                                       const std::function<double(double)>& alpha);
Complex trace_against_spectral_measure(const BlockOperator& v, const EigenSystem& es,
                                       const std::function<double(double)>& alpha);

/// Two-valued retraction: b on [0, inf) and a on (-inf, 0), with eigenvalues
/// within kappa of zero snapped to zero first (so they land on b).
BlockOperator sign_ab(const BlockOperator& f, double a, double b);

/// Bounded transform phi(lambda) = lambda (1 + lambda^2)^{-1/2}.
double phi_map(double lambda);
double phi_map_deriv(double lambda);
BlockOperator f_map(const BlockOperator& h);

/// Pair of projections over a shared context; constructor verifies p^2 = p,
/// Hermiticity and the context match to 1e-10.
struct ProjectionPair {
    BlockOperator p;
    BlockOperator q;

    ProjectionPair(BlockOperator p_in, BlockOperator q_in);
};

/// Relative index of a projection pair, oriented so that commuting pairs give
/// tau(Q) - tau(P): the weighted trace of the +1 eigenspace of Q - P minus
/// that of the -1 eigenspace.
double relative_index(const ProjectionPair& pq);

struct ResolventBoundResult {
    bool ok = false;
    double margin = 0.0;  // minimal eigenvalue of the difference
};

/// Verifies f(|A|)(1 + H0^2)^{-1} - (1 + (H0+A)^2)^{-1} >= 0 with
/// f(a) = 1 + a^2/2 + a sqrt(a^2+4)/2.
ResolventBoundResult resolvent_bound_check(const BlockOperator& h0, const BlockOperator& a);

}  // namespace specflow

#endif
