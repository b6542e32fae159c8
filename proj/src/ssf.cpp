#include "specflow/ssf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specflow {

namespace {

// Re tau(V f(H)) from a precomputed eigensystem of H.
double trace_v_f(const EigenSystem& es, const BlockOperator& v,
                 const std::function<double(double)>& f) {
    double s = 0.0;
    for (size_t k = 0; k < es.values.size(); ++k) {
        const double w = es.context->blocks()[k].weight;
        const Matrix& u = es.vectors[k];
        const Matrix vu = v.block(static_cast<int>(k)) * u;
        for (Eigen::Index i = 0; i < es.values[k].size(); ++i) {
            s += w * f(es.values[k][i]) * u.col(i).dot(vu.col(i)).real();
        }
    }
    return s;
}

SsfProfile merge_jumps(std::vector<SsfJump> raw, double kap) {
    std::sort(raw.begin(), raw.end(),
              [](const SsfJump& a, const SsfJump& b) { return a.location < b.location; });
    SsfProfile profile;
    profile.merge_kappa = kap;
    size_t i = 0;
    while (i < raw.size()) {
        size_t j = i;
        double sum = 0.0;
        double loc = 0.0;
        double mass = 0.0;
        while (j < raw.size() && raw[j].location - raw[i].location <= kap) {
            sum += raw[j].jump;
            loc += raw[j].location;
            mass += std::abs(raw[j].jump);
            ++j;
        }
        loc /= static_cast<double>(j - i);
        if (std::abs(sum) > 1e-12 * mass) profile.jumps.push_back({loc, sum});
        i = j;
    }
    return profile;
}

}  // namespace

double SsfProfile::total_jump() const {
    double s = 0.0;
    for (const auto& j : jumps) s += j.jump;
    return s;
}

SsfProfile ssf_profile(const EigenSystem& es0, const EigenSystem& es1) {
    if (!(*es0.context == *es1.context)) throw std::invalid_argument("ssf_profile: context mismatch");
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    std::vector<SsfJump> raw;
    for (const auto& [lam, w] : es0.sorted_values()) raw.push_back({lam, w});
    for (const auto& [lam, w] : es1.sorted_values()) raw.push_back({lam, -w});
    return merge_jumps(std::move(raw), kap);
}

SsfProfile ssf_profile(const BlockOperator& h0, const BlockOperator& h1) {
    if (!same_context(h0, h1)) throw std::invalid_argument("ssf_profile: context mismatch");
    return ssf_profile(eigendecompose(h0), eigendecompose(h1));
}

double ssf_eval_left(const SsfProfile& profile, double lam) {
    double s = 0.0;
    for (const auto& j : profile.jumps) {
        if (j.location < lam - profile.merge_kappa) s += j.jump;
    }
    return s;
}

double ssf_eval_right(const SsfProfile& profile, double lam) {
    double s = 0.0;
    for (const auto& j : profile.jumps) {
        if (j.location <= lam + profile.merge_kappa) s += j.jump;
    }
    return s;
}

double ssf_eval(const SsfProfile& profile, double lam) {
    return 0.5 * (ssf_eval_left(profile, lam) + ssf_eval_right(profile, lam));
}

double integrate_profile_antideriv(const SsfProfile& profile,
                                   const std::function<double(double)>& antideriv) {
    // xi vanishes outside [first jump, last jump]; constant on each step.
    double total = 0.0;
    double level = 0.0;
    for (size_t k = 0; k + 1 < profile.jumps.size(); ++k) {
        level += profile.jumps[k].jump;
        total += level * (antideriv(profile.jumps[k + 1].location) - antideriv(profile.jumps[k].location));
    }
    return total;
}

double integrate_profile_quadrature(const SsfProfile& profile,
                                    const std::function<double(double)>& fn,
                                    const QuadratureSpec& spec, double lo, double hi) {
    double total = 0.0;
    double level = 0.0;
    for (size_t k = 0; k + 1 < profile.jumps.size(); ++k) {
        level += profile.jumps[k].jump;
        const double a = std::max(lo, profile.jumps[k].location);
        const double b = std::min(hi, profile.jumps[k + 1].location);
        if (b > a && level != 0.0) total += level * integrate_scalar(fn, spec, a, b).value;
    }
    return total;
}

double profile_measure(const SsfProfile& profile, double lo, double hi) {
    double total = 0.0;
    double level = 0.0;
    for (size_t k = 0; k + 1 < profile.jumps.size(); ++k) {
        level += profile.jumps[k].jump;
        const double a = std::max(lo, profile.jumps[k].location);
        const double b = std::min(hi, profile.jumps[k + 1].location);
        if (b > a) total += level * (b - a);
    }
    return total;
}

double ssm_quadrature(const BlockOperator& h0, const BlockOperator& v, const Interval& interval,
                      const QuadratureSpec& spec) {
    if (!same_context(h0, v)) throw std::invalid_argument("ssm_quadrature: context mismatch");
    if (!(interval.lo <= interval.hi)) throw std::invalid_argument("ssm_quadrature: invalid interval");
    const PiecewisePath path = PiecewisePath::line(h0, h0 + v);
    const double kap = pair_kappa(h0, h0 + v);
    const auto integrand = [&](double r) {
        const EigenSystem es = eigendecompose(path.at(r));
        return trace_v_f(es, v, [&](double lam) {
            return interval_contains(interval, lam, kap) ? 1.0 : 0.0;
        });
    };
    std::vector<double> levels;
    if (std::isfinite(interval.lo)) levels.push_back(interval.lo);
    if (std::isfinite(interval.hi)) levels.push_back(interval.hi);
    return integrate_with_crossings(integrand, path, levels, spec);
}

double pairing(const BlockOperator& h0, const BlockOperator& v, const WeightFunction& f,
               const QuadratureSpec& spec) {
    if (!same_context(h0, v)) throw std::invalid_argument("pairing: context mismatch");
    const PiecewisePath path = PiecewisePath::line(h0, h0 + v);
    const auto integrand = [&](double r) {
        return trace_v_f(eigendecompose(path.at(r)), v, f.eval);
    };
    return integrate_scalar(integrand, spec, 0.0, 1.0).value;
}

double trace_formula_residual(const BlockOperator& h0, const BlockOperator& h1,
                              const WeightFunction& f) {
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    double lhs = 0.0;  // tau(f(H1) - f(H0))
    for (const auto& [lam, w] : es1.sorted_values()) lhs += w * f.eval(lam);
    for (const auto& [lam, w] : es0.sorted_values()) lhs -= w * f.eval(lam);
    const SsfProfile profile = ssf_profile(es0, es1);
    const double rhs = integrate_profile_antideriv(profile, f.eval);
    return std::abs(lhs - rhs);
}

SsfProfile invariance_map(const SsfProfile& profile) {
    SsfProfile out;
    out.merge_kappa = profile.merge_kappa;
    out.bounded = true;
    out.domain_lo = -1.0;
    out.domain_hi = 1.0;
    for (const auto& j : profile.jumps) out.jumps.push_back({phi_map(j.location), j.jump});
    return out;
}

double additivity_residual(const BlockOperator& h0, const BlockOperator& h1,
                           const BlockOperator& h2, double lam) {
    const SsfProfile p20 = ssf_profile(h0, h2);
    const SsfProfile p21 = ssf_profile(h1, h2);
    const SsfProfile p10 = ssf_profile(h0, h1);
    return std::abs(ssf_eval(p20, lam) - ssf_eval(p21, lam) - ssf_eval(p10, lam));
}

}  // namespace specflow
