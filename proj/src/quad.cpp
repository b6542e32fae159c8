#include "specflow/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace specflow {

namespace {

std::vector<std::pair<double, double>> compute_gauss_legendre(int n) {
    // Newton iteration on P_n, nodes seeded by the Chebyshev approximation.
    std::vector<std::pair<double, double>> rule(static_cast<size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule[static_cast<size_t>(i - 1)] = {-z, w};
        rule[static_cast<size_t>(n - i)] = {z, w};
    }
    // Scale out the residual rounding so constants integrate exactly.
    double wsum = 0.0;
    for (const auto& [x, w] : rule) wsum += w;
    for (auto& [x, w] : rule) w *= 2.0 / wsum;
    return rule;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order) {
    if (order < 2) throw std::invalid_argument("gauss_legendre_rule: order must be >= 2");
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

namespace {

// Globally adaptive bisection: the panel with the largest error estimate is
// refined until the summed estimate meets the tolerance.  The global
// criterion is what lets integrands with a small evaluation-noise floor
// terminate: a per-panel tolerance share shrinks exactly as fast as a noisy
// panel's error contribution and would subdivide forever.  Value must
// support +=, double * Value and a norm; instantiated for double and
// BlockOperator below.
template <typename Value, typename Eval, typename Norm>
Value adaptive_integrate(const Eval& panel_integral, const Norm& norm, const QuadratureSpec& spec,
                         double r0, double r1, double* error_out) {
    if (!(spec.tolerance > 0.0)) throw std::invalid_argument("QuadratureSpec: tolerance must be > 0");
    if (spec.order < 2) throw std::invalid_argument("QuadratureSpec: order must be >= 2");
    if (r0 == r1) {
        if (error_out) *error_out = 0.0;
        return panel_integral(r0, r0);  // zero-width: evaluates to zero value
    }

    struct Panel {
        double a, b;
        Value left, right;  // one-level refinement of this panel
        double local;       // |left + right - own GL value|
        int depth;
        bool splittable;
    };

    const double total = std::abs(r1 - r0);
    const auto make_panel = [&](double a, double b, const Value& own, int depth) {
        const double mid = 0.5 * (a + b);
        Panel p{a, b, panel_integral(a, mid), panel_integral(mid, b), 0.0, depth, true};
        Value diff = p.left;
        diff += p.right;
        diff += -1.0 * own;
        p.local = norm(diff);
        p.splittable = depth < spec.max_subdivisions && std::abs(b - a) >= 1e-12 * total;
        return p;
    };

    // Heap orders by error estimate; ties resolve by position so the
    // refinement sequence is deterministic.
    const auto worse = [](const Panel& x, const Panel& y) {
        if (x.local != y.local) return x.local < y.local;
        return x.a > y.a;
    };

    std::vector<Panel> heap;
    const int panels = std::max(1, spec.initial_panels);
    double err = 0.0;
    Value sum = panel_integral(r0, r0);  // zero of the value type
    for (int k = 0; k < panels; ++k) {
        const double a = r0 + (r1 - r0) * static_cast<double>(k) / panels;
        const double b = (k + 1 == panels) ? r1 : r0 + (r1 - r0) * static_cast<double>(k + 1) / panels;
        heap.push_back(make_panel(a, b, panel_integral(a, b), 0));
        err += heap.back().local;
        sum += heap.back().left;
        sum += heap.back().right;
    }
    std::make_heap(heap.begin(), heap.end(), worse);

    long splits = 0;
    while (err > spec.tolerance * std::max(1.0, norm(sum)) ) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel p = std::move(heap.back());
        heap.pop_back();
        if (!p.splittable) {
            throw std::runtime_error("integrate: subdivision budget exhausted before tolerance");
        }
        if (++splits > (1l << 20)) {
            throw std::runtime_error("integrate: panel budget exhausted before tolerance");
        }
        const double mid = 0.5 * (p.a + p.b);
        Panel c1 = make_panel(p.a, mid, p.left, p.depth + 1);
        Panel c2 = make_panel(mid, p.b, p.right, p.depth + 1);
        err += c1.local + c2.local - p.local;
        sum += c1.left;
        sum += c1.right;
        sum += c2.left;
        sum += c2.right;
        sum += -1.0 * p.left;
        sum += -1.0 * p.right;
        heap.push_back(std::move(c1));
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(std::move(c2));
        std::push_heap(heap.begin(), heap.end(), worse);
    }

    // Recompute the final value in ascending interval order so results do not
    // depend on the refinement history round-off.
    std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    Value out = panel_integral(r0, r0);
    for (const Panel& p : heap) {
        out += p.left;
        out += p.right;
    }
    if (error_out) *error_out = err;
    return out;
}

}  // namespace

IntegralResult integrate_scalar(const std::function<double(double)>& fn,
                                const QuadratureSpec& spec, double r0, double r1) {
    const auto& rule = gauss_legendre_rule(spec.order);
    const auto panel = [&](double a, double b) {
        if (a == b) return 0.0;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0.0;
        for (const auto& [x, w] : rule) s += w * fn(mid + half * x);
        return s * half;
    };
    IntegralResult res;
    res.value = adaptive_integrate<double>(panel, [](double x) { return std::abs(x); }, spec, r0,
                                           r1, &res.error);
    return res;
}

BlockOperator integrate_operator(const std::function<BlockOperator(double)>& fn,
                                 const QuadratureSpec& spec, double r0, double r1) {
    const auto& rule = gauss_legendre_rule(spec.order);
    const auto panel = [&](double a, double b) -> BlockOperator {
        if (a == b) return 0.0 * fn(a);
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        BlockOperator s = rule[0].second * fn(mid + half * rule[0].first);
        for (size_t i = 1; i < rule.size(); ++i) {
            s += rule[i].second * fn(mid + half * rule[i].first);
        }
        return half * s;
    };
    return adaptive_integrate<BlockOperator>(
        panel, [](const BlockOperator& a) { return a.frob_norm(); }, spec, r0, r1, nullptr);
}

PiecewisePath::PiecewisePath(std::vector<BlockOperator> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw std::invalid_argument("PiecewisePath: need at least 2 vertices");
    for (const auto& v : vertices_) {
        if (!same_context(v, vertices_.front())) {
            throw std::invalid_argument("PiecewisePath: vertices over different contexts");
        }
        if (!v.is_hermitian(1e-10 * (1.0 + v.max_abs()))) {
            throw std::invalid_argument("PiecewisePath: vertices must be Hermitian");
        }
    }
}

PiecewisePath PiecewisePath::line(const BlockOperator& from, const BlockOperator& to) {
    return PiecewisePath({from, to});
}

BlockOperator PiecewisePath::direction(int segment) const {
    return vertices_[static_cast<size_t>(segment) + 1] - vertices_[static_cast<size_t>(segment)];
}

BlockOperator PiecewisePath::at_local(int segment, double t) const {
    const auto& a = vertices_[static_cast<size_t>(segment)];
    const auto& b = vertices_[static_cast<size_t>(segment) + 1];
    return (1.0 - t) * a + t * b;
}

BlockOperator PiecewisePath::at(double r) const {
    const int segs = segment_count();
    const double scaled = r * segs;
    int k = static_cast<int>(std::floor(scaled));
    k = std::clamp(k, 0, segs - 1);
    return at_local(k, scaled - k);
}

double PiecewisePath::max_op_norm() const {
    double m = 0.0;
    for (const auto& v : vertices_) m = std::max(m, v.op_norm());
    return m;
}

namespace {

// Ascending eigenvalues of one block of H_r; sorted branches of a continuous
// Hermitian family are continuous, so sign changes of branch - level locate
// crossings.
Eigen::VectorXd branch_values(const PiecewisePath& path, int block, double r) {
    const BlockOperator h = path.at(r);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.block(block));
    return solver.eigenvalues();
}

int crossing_direction(double fa, double fb, double dr) {
    const double slope = (fb - fa) / dr;
    if (std::abs(slope) < 1e-9) return 0;
    return slope > 0.0 ? 1 : -1;
}

}  // namespace

std::vector<Crossing> detect_level_crossings(const PiecewisePath& path, double level) {
    constexpr int kSamplesPerSegment = 64;
    constexpr double kTol = 1e-12;
    std::vector<Crossing> out;
    const auto& ctx = *path.context();
    const int segs = path.segment_count();
    const int blocks = ctx.block_count();

    for (int seg = 0; seg < segs; ++seg) {
        const double r_lo = static_cast<double>(seg) / segs;
        const double r_hi = static_cast<double>(seg + 1) / segs;
        const double dr = (r_hi - r_lo) / kSamplesPerSegment;

        std::vector<Eigen::VectorXd> prev(static_cast<size_t>(blocks));
        for (int blk = 0; blk < blocks; ++blk) prev[static_cast<size_t>(blk)] = branch_values(path, blk, r_lo);

        for (int s = 1; s <= kSamplesPerSegment; ++s) {
            const double r = (s == kSamplesPerSegment) ? r_hi : r_lo + s * dr;
            for (int blk = 0; blk < blocks; ++blk) {
                const double weight = ctx.blocks()[static_cast<size_t>(blk)].weight;
                const Eigen::VectorXd cur = branch_values(path, blk, r);
                auto& pv = prev[static_cast<size_t>(blk)];
                for (Eigen::Index i = 0; i < cur.size(); ++i) {
                    const double fa = pv[i] - level;
                    const double fb = cur[i] - level;
                    if (fb == 0.0) {
                        // Exact hit at a sample point; plateaus (fa == fb == 0)
                        // are not crossings.
                        if (fa != 0.0) out.push_back({r, crossing_direction(fa, fb, dr), weight});
                    } else if (fa == 0.0) {
                        // Only the path start can open on the level without the
                        // previous subinterval having recorded it.
                        if (s == 1 && seg == 0) {
                            out.push_back({r - dr, crossing_direction(fa, fb, dr), weight});
                        }
                    } else if (fa * fb < 0.0) {
                        double lo = r - dr;
                        double hi = r;
                        double flo = fa;
                        while (hi - lo > kTol) {
                            const double mid = 0.5 * (lo + hi);
                            const double fm = branch_values(path, blk, mid)[i] - level;
                            if (fm == 0.0) {
                                lo = hi = mid;
                                break;
                            }
                            if (flo * fm < 0.0) {
                                hi = mid;
                            } else {
                                lo = mid;
                                flo = fm;
                            }
                        }
                        out.push_back({0.5 * (lo + hi), crossing_direction(fa, fb, dr), weight});
                    }
                }
                pv = cur;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.r < b.r; });
    return out;
}

double integrate_with_crossings(const std::function<double(double)>& fn,
                                const PiecewisePath& path, const std::vector<double>& levels,
                                const QuadratureSpec& spec) {
    std::vector<double> cuts{0.0, 1.0};
    if (spec.crossing_aware) {
        for (double level : levels) {
            for (const Crossing& c : detect_level_crossings(path, level)) cuts.push_back(c.r);
        }
    }
    // Segment joints are kink points of the path; split there too.
    for (int k = 1; k < path.segment_count(); ++k) {
        cuts.push_back(static_cast<double>(k) / path.segment_count());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               cuts.end());

    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += integrate_scalar(fn, spec, cuts[i], cuts[i + 1]).value;
    }
    return total;
}

}  // namespace specflow
