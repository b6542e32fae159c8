#include "specflow/sflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specflow {

namespace {

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

// h(x) = af((b-x)(x-a)) extended by zero outside (a, b); the clamp keeps
// profile functions like alpha_eps off their domain boundary.  The quadratic
// is evaluated as c^2 - d^2 about its vertex so that near the vertex the
// distance d = x - (a+b)/2 survives to relative precision; the plain product
// form loses it and turns sharply peaked af into a noisy integrand there.
std::function<double(double)> compose_af(const std::function<double(double)>& af, double a,
                                         double b) {
    const double mid = 0.5 * (a + b);
    const double c2 = 0.25 * (b - a) * (b - a);
    return [af, mid, c2](double x) {
        const double d = x - mid;
        const double q = c2 - d * d;
        return q > 0.0 ? af(q) : 0.0;
    };
}

}  // namespace

std::string to_string(SfMethod method) {
    switch (method) {
        case SfMethod::crossing: return "crossing";
        case SfMethod::ssf_kernel: return "ssf_kernel";
        case SfMethod::bounded_formula: return "bounded_formula";
        case SfMethod::theta: return "theta";
        case SfMethod::summable: return "summable";
        case SfMethod::projection_pair: return "projection_pair";
    }
    return "unknown";
}

SpectralFlowResult sf_crossing(const BlockOperator& h0, const BlockOperator& h1, double mu) {
    if (!same_context(h0, h1)) throw std::invalid_argument("sf_crossing: context mismatch");
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    SpectralFlowResult res;
    res.method = SfMethod::crossing;
    res.value = count_geq(es1, mu, kap) - count_geq(es0, mu, kap);
    res.diagnostics.ker_h0 = kernel_trace(es0, mu, kap);
    res.diagnostics.ker_h1 = kernel_trace(es1, mu, kap);
    return res;
}

SpectralFlowResult sf_from_ssf(const BlockOperator& h0, const BlockOperator& h1, double mu) {
    if (!same_context(h0, h1)) throw std::invalid_argument("sf_from_ssf: context mismatch");
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    const SsfProfile profile = ssf_profile(es0, es1);
    SpectralFlowResult res;
    res.method = SfMethod::ssf_kernel;
    res.diagnostics.xi = ssf_eval(profile, mu);
    res.diagnostics.ker_h0 = kernel_trace(es0, mu, kap);
    res.diagnostics.ker_h1 = kernel_trace(es1, mu, kap);
    res.value = res.diagnostics.xi + 0.5 * res.diagnostics.ker_h1 - 0.5 * res.diagnostics.ker_h0;
    return res;
}

double gamma_h(const BlockOperator& f, const std::function<double(double)>& af, double a, double b,
               const QuadratureSpec& spec) {
    if (!(a < 0.0 && 0.0 < b)) throw std::invalid_argument("gamma_h: need a < 0 < b");
    const auto h = compose_af(af, a, b);
    const BlockOperator ftilde = sign_ab(f, a, b);
    const BlockOperator k = ftilde - f;
    const auto integrand = [&](double r) {
        const BlockOperator fr = f + r * k;
        return trace_v_f(eigendecompose(fr), k, h);
    };
    return integrate_scalar(integrand, spec, 0.0, 1.0).value;
}

SpectralFlowResult sf_bounded_formula(const BlockOperator& f0, const BlockOperator& f1,
                                      const std::function<double(double)>& af, double a, double b,
                                      const QuadratureSpec& spec) {
    if (!same_context(f0, f1)) throw std::invalid_argument("sf_bounded_formula: context mismatch");
    if (!(a < 0.0 && 0.0 < b)) throw std::invalid_argument("sf_bounded_formula: need a < 0 < b");
    const EigenSystem es0 = eigendecompose(f0);
    const EigenSystem es1 = eigendecompose(f1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    if (es0.min_value() < a - kap || es0.max_value() > b + kap || es1.min_value() < a - kap ||
        es1.max_value() > b + kap) {
        throw std::invalid_argument("sf_bounded_formula: spectra escape [a, b]");
    }

    const auto h_raw = compose_af(af, a, b);
    const double mass = integrate_scalar(h_raw, spec, a, b).value;
    if (std::abs(mass) < 1e-13) throw std::invalid_argument("sf_bounded_formula: h integral vanishes");
    const auto af_scaled = [af, mass](double s) { return af(s) / mass; };

    const SsfProfile profile = ssf_profile(es0, es1);
    const double xi_term =
        integrate_profile_quadrature(profile, compose_af(af_scaled, a, b), spec, a, b);
    const double g1 = gamma_h(f1, af_scaled, a, b, spec);
    const double g0 = gamma_h(f0, af_scaled, a, b, spec);

    SpectralFlowResult res;
    res.method = SfMethod::bounded_formula;
    res.diagnostics.xi = xi_term;
    res.diagnostics.gamma0 = g0;
    res.diagnostics.gamma1 = g1;
    res.diagnostics.h_scale = 1.0 / mass;
    res.value = xi_term + g1 - g0;
    return res;
}

SpectralFlowResult sf_projection_pair(const ProjectionPair& pq,
                                      const std::function<double(double)>& af, double a, double b,
                                      const QuadratureSpec& spec) {
    if (!(a < 0.0 && 0.0 < b)) throw std::invalid_argument("sf_projection_pair: need a < 0 < b");
    const double span = b - a;
    const auto c_integrand = [&](double r) { return span * af(std::max(span * span * (r - r * r), 0.0)); };
    const double c_ab = integrate_scalar(c_integrand, spec, 0.0, 1.0).value;
    if (std::abs(c_ab) < 1e-13) throw std::invalid_argument("sf_projection_pair: C_{a,b} vanishes");

    const ContextPtr ctx = pq.p.context();
    const BlockOperator f0 = span * pq.p + a * BlockOperator::identity(ctx);
    const BlockOperator fdot = span * (pq.q - pq.p);
    const auto integrand = [&](double r) {
        const BlockOperator fr = f0 + r * fdot;
        const BlockOperator id = BlockOperator::identity(ctx);
        const BlockOperator arg = (b * id - fr) * (fr - a * id);
        const EigenSystem es = eigendecompose(arg);
        return trace_v_f(es, fdot, [&](double s) { return af(std::max(s, 0.0)); });
    };
    const double integral = integrate_scalar(integrand, spec, 0.0, 1.0).value;

    SpectralFlowResult res;
    res.method = SfMethod::projection_pair;
    res.diagnostics.integral_term = integral;
    res.diagnostics.h_scale = 1.0 / c_ab;
    res.value = integral / c_ab;
    return res;
}

double one_form_integral(const PiecewisePath& path, const WeightFunction& f,
                         const QuadratureSpec& spec) {
    double total = 0.0;
    for (int seg = 0; seg < path.segment_count(); ++seg) {
        const BlockOperator v = path.direction(seg);
        total += integrate_scalar(
            [&](double t) { return trace_v_f(eigendecompose(path.at_local(seg, t)), v, f.eval); },
            spec, 0.0, 1.0).value;
    }
    return total;
}

double theta_potential(const BlockOperator& h0, const BlockOperator& h,
                       const WeightFunction& f, const QuadratureSpec& spec) {
    return one_form_integral(PiecewisePath::line(h0, h), f, spec);
}

double eta_eps(const BlockOperator& h, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eta_eps: eps must be > 0");
    const EigenSystem es = eigendecompose(h);
    const double kap = 1e-9 * (1.0 + es.op_norm());
    const double sq = std::sqrt(eps);
    double s = 0.0;
    for (const auto& [lam, w] : es.sorted_values()) {
        if (std::abs(lam) <= kap) continue;  // kernel contributes nothing
        s += w * (lam > 0.0 ? 1.0 : -1.0) * std::erfc(sq * std::abs(lam));
    }
    return s;
}

double eta_eps_quadrature(const BlockOperator& h, double eps, const QuadratureSpec& spec) {
    if (!(eps > 0.0)) throw std::invalid_argument("eta_eps_quadrature: eps must be > 0");
    const EigenSystem es = eigendecompose(h);
    const double kap = 1e-9 * (1.0 + es.op_norm());
    const auto spectrum = es.sorted_values();
    double min_nonzero = 0.0;
    for (const auto& [lam, w] : spectrum) {
        (void)w;
        if (std::abs(lam) > kap && (min_nonzero == 0.0 || std::abs(lam) < min_nonzero)) {
            min_nonzero = std::abs(lam);
        }
    }
    if (min_nonzero == 0.0) return 0.0;
    const double t_max = 14.0 * std::log(10.0) / (min_nonzero * min_nonzero);
    const auto integrand = [&](double t) {
        double s = 0.0;
        for (const auto& [lam, w] : spectrum) {
            if (std::abs(lam) <= kap) continue;
            s += w * lam * std::exp(-t * lam * lam);
        }
        return s / std::sqrt(t);
    };
    return integrate_scalar(integrand, spec, eps, std::max(t_max, eps * 2.0)).value / std::sqrt(M_PI);
}

SpectralFlowResult sf_theta(const BlockOperator& h0, const BlockOperator& h1, double eps,
                            const QuadratureSpec& spec) {
    if (!same_context(h0, h1)) throw std::invalid_argument("sf_theta: context mismatch");
    if (!(eps > 0.0)) throw std::invalid_argument("sf_theta: eps must be > 0");
    const BlockOperator v = h1 - h0;
    const auto integrand = [&](double r) {
        const BlockOperator hr = h0 + r * v;
        return trace_v_f(eigendecompose(hr), v, [eps](double x) { return std::exp(-eps * x * x); });
    };
    SpectralFlowResult res;
    res.method = SfMethod::theta;
    res.diagnostics.integral_term =
        std::sqrt(eps / M_PI) * integrate_scalar(integrand, spec, 0.0, 1.0).value;
    res.diagnostics.eta0 = eta_eps(h0, eps);
    res.diagnostics.eta1 = eta_eps(h1, eps);
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    res.diagnostics.ker_h0 = kernel_trace(es0, 0.0, kap);
    res.diagnostics.ker_h1 = kernel_trace(es1, 0.0, kap);
    res.value = res.diagnostics.integral_term +
                0.5 * (res.diagnostics.eta1 - res.diagnostics.eta0) +
                0.5 * (res.diagnostics.ker_h1 - res.diagnostics.ker_h0);
    return res;
}

SpectralFlowResult sf_summable(const BlockOperator& h0, const BlockOperator& h1,
                               const WeightFunction& f, double mu, const QuadratureSpec& spec) {
    if (!same_context(h0, h1)) throw std::invalid_argument("sf_summable: context mismatch");
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));
    for (size_t k = 0; k < es0.values.size(); ++k) {
        if ((es0.values[k] - es1.values[k]).cwiseAbs().maxCoeff() > kap) {
            throw std::invalid_argument("sf_summable: endpoints are not unitarily equivalent");
        }
    }
    const double c = normalization_constant(f);
    if (!(c > 0.0)) throw std::invalid_argument("sf_summable: normalization C must be positive");

    const BlockOperator v = h1 - h0;
    const auto integrand = [&](double r) {
        const BlockOperator hr = h0 + r * v;
        return trace_v_f(eigendecompose(hr), v, [&](double x) { return f.eval(x - mu); });
    };
    SpectralFlowResult res;
    res.method = SfMethod::summable;
    res.diagnostics.integral_term = integrate_scalar(integrand, spec, 0.0, 1.0).value;
    res.diagnostics.h_scale = 1.0 / c;
    res.value = res.diagnostics.integral_term / c;
    return res;
}

double infinitesimal_pairing(const PiecewisePath& path, const WeightFunction& phi,
                             const QuadratureSpec& spec) {
    return one_form_integral(path, phi, spec);
}

double sf_weighted_by(const BlockOperator& h0, const BlockOperator& h1, const WeightFunction& phi,
                      const QuadratureSpec& spec) {
    if (!same_context(h0, h1)) throw std::invalid_argument("sf_weighted_by: context mismatch");
    const EigenSystem es0 = eigendecompose(h0);
    const EigenSystem es1 = eigendecompose(h1);
    const double kap = 1e-9 * (1.0 + std::max(es0.op_norm(), es1.op_norm()));

    // sf(lambda) is a step function with breakpoints at the endpoint spectra;
    // integrate phi exactly per step.
    std::vector<double> cuts;
    for (const auto& [lam, w] : es0.sorted_values()) {
        (void)w;
        cuts.push_back(lam);
    }
    for (const auto& [lam, w] : es1.sorted_values()) {
        (void)w;
        cuts.push_back(lam);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty()) return 0.0;

    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (!(b > a)) continue;
        const double mid = 0.5 * (a + b);
        const double sf_mid = count_geq(es1, mid, kap) - count_geq(es0, mid, kap);
        if (sf_mid == 0.0) continue;
        double piece;
        if (phi.has_antideriv()) {
            piece = phi.antideriv(b) - phi.antideriv(a);
        } else {
            piece = integrate_scalar(phi.eval, spec, a, b).value;
        }
        total += sf_mid * piece;
    }
    return total;
}

double gamma_eta_identity_check(const BlockOperator& h, double eps, const QuadratureSpec& spec) {
    const AlphaEpsProfiles prof = alpha_eps_profiles(eps);
    const BlockOperator fh = f_map(h);
    const double gamma = gamma_h(fh, prof.alpha, -1.0, 1.0, spec);
    const EigenSystem es = eigendecompose(h);
    const double kap = 1e-9 * (1.0 + es.op_norm());
    const double expected = 0.5 * (eta_eps(h, eps) + kernel_trace(es, 0.0, kap));
    return std::abs(gamma - expected);
}

}  // namespace specflow
