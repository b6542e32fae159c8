#ifndef SPECFLOW_QUAD_HPP
#define SPECFLOW_QUAD_HPP

#include <functional>
#include <vector>

#include "specflow/algebra.hpp"

namespace specflow {

/// Deterministic adaptive Gauss-Legendre settings.  `order` is the panel
/// rule order; `initial_panels` forces a uniform pre-split so narrow features
/// near domain endpoints are seen before adaptivity decides to stop.
struct QuadratureSpec {
    int order = 16;
    double tolerance = 1e-9;
    int max_subdivisions = 40;  // max bisection depth per panel
    bool crossing_aware = true;
    int initial_panels = 16;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  // accumulated panel error estimate
};

/// Gauss-Legendre nodes/weights on [-1, 1] for the given order (cached).
const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order);

/// Adaptive bisection quadrature of fn over [r0, r1].  Exact (to rounding) on
/// polynomials of degree <= 2*order - 1; throws when the subdivision budget
/// is exhausted before the tolerance is met.  Serial and bitwise
/// reproducible for a fixed spec.
IntegralResult integrate_scalar(const std::function<double(double)>& fn,
                                const QuadratureSpec& spec, double r0, double r1);

/// Same scheme for operator-valued integrands; the error estimate uses the
/// Frobenius norm.
BlockOperator integrate_operator(const std::function<BlockOperator(double)>& fn,
                                 const QuadratureSpec& spec, double r0, double r1);

/// Piecewise-linear operator path r in [0, 1] -> H_r through >= 2 Hermitian
/// vertices over a shared context, with uniform parameterization across
/// segments.
class PiecewisePath {
public:
    explicit PiecewisePath(std::vector<BlockOperator> vertices);

    static PiecewisePath line(const BlockOperator& from, const BlockOperator& to);

    int segment_count() const { return static_cast<int>(vertices_.size()) - 1; }
    const BlockOperator& vertex(int k) const { return vertices_[static_cast<size_t>(k)]; }
    const BlockOperator& start() const { return vertices_.front(); }
    const BlockOperator& end() const { return vertices_.back(); }
    const ContextPtr& context() const { return vertices_.front().context(); }

    /// Segment direction V_k = vertex_{k+1} - vertex_k (per unit of the
    /// segment-local parameter).
    BlockOperator direction(int segment) const;
    /// Point on segment `segment` at local parameter t in [0, 1].
    BlockOperator at_local(int segment, double t) const;
    /// Point at the global parameter r in [0, 1].
    BlockOperator at(double r) const;

    double max_op_norm() const;

private:
    std::vector<BlockOperator> vertices_;
};

/// One eigenvalue branch of the path meeting a level: global parameter r,
/// crossing direction (+1 up, -1 down, 0 tangential) and the trace weight of
/// the branch's block.
struct Crossing {
    double r = 0.0;
    int direction = 0;
    double weight = 0.0;
};

/// Finds all parameters where a sorted eigenvalue branch of H_r equals
/// `level`, by sampling each segment at 64 subintervals and bisecting sign
/// changes to 1e-12.  Tangential touchings may surface as paired crossings
/// with direction 0.
std::vector<Crossing> detect_level_crossings(const PiecewisePath& path, double level);

/// Integrates fn over [0, 1] after splitting the domain at every detected
/// eigenvalue crossing of the given levels; subintervals are summed in
/// ascending order.
double integrate_with_crossings(const std::function<double(double)>& fn,
                                const PiecewisePath& path, const std::vector<double>& levels,
                                const QuadratureSpec& spec);

}  // namespace specflow

#endif
