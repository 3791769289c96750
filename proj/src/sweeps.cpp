#include "wallflux/sweeps.hpp"

#include <algorithm>
#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/filtering.hpp"
#include "wallflux/parallel.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& yerr) {
    RateFit fit;
    fit.abscissa = x;
    fit.values = y;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = std::fabs(y[i]);
        if (v <= 0.0 || x[i] <= 0.0) continue;
        if (!yerr.empty() && yerr[i] > 0.1 * v) continue;  // quadrature-noise dominated
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(v));
    }
    fit.points_used = static_cast<int>(lx.size());
    if (fit.points_used < 3) return fit;
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-14) return fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.fit_residual = std::sqrt(ss / n);
    if (lx.size() > 2) {
        const double var = ss / (n - 2.0);
        fit.exponent_stderr = std::sqrt(var * n / denom);
    }
    fit.valid = true;
    return fit;
}

double richardson_limit(const std::vector<double>& abscissa, const std::vector<double>& values,
                        double p) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n == 1) return values[0];
    p = std::min(4.0, std::max(0.5, p));
    // Snap to an integer leading order when the fit is close to one; the
    // extrapolation then cancels the leading term exactly.
    if (std::fabs(p - std::round(p)) < 0.2) p = std::round(p);

    // Up to three elimination levels on the tail of the sequence, assuming
    // v = L + C1 h^p + C2 h^(p+1) + ...
    const std::size_t use = std::min<std::size_t>(n, 4);
    std::vector<double> h(abscissa.end() - use, abscissa.end());
    std::vector<double> v(values.end() - use, values.end());
    for (std::size_t level = 0; level + 1 < use; ++level) {
        const double q = p + level;
        std::vector<double> next(v.size() - 1);
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const double r = h[i] / h[i + 1];
            const double rq = std::pow(r, q);
            next[i] = v[i + 1] + (v[i + 1] - v[i]) / (rq - 1.0);
        }
        v = std::move(next);
        h.erase(h.begin());
    }
    return v.back();
}

// ---------------------------------------------------------------------------
// Scale sweep
// ---------------------------------------------------------------------------

ScaleSweepResult run_scale_sweep(const FlowField& field, const Body& body,
                                 const ExtendedTestField& phi, const std::vector<double>& h_list,
                                 double ell_ratio, const std::string& target_kind,
                                 const QuadratureSpec& spec, int threads) {
    if (h_list.empty()) throw ConfigError("scale sweep needs a nonempty h list");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (h_list[i] >= h_list[i - 1]) throw ConfigError("h list must be decreasing");
    if (!(ell_ratio > 0.0 && ell_ratio < 1.0))
        throw ConfigError("ell rule must satisfy 0 < ell/h < 1");

    ScaleSweepResult res;
    res.field_id = field.id();
    res.section_id = phi.section().id;
    res.target_kind = target_kind;

    if (target_kind == "wall_shear") {
        const PairingValue t = pair_wall_shear(field, body, phi.section(), spec);
        res.target = t.value;
        res.target_err = t.quad_error;
    } else if (target_kind == "wall_pressure") {
        // Flux-pairing convention: the normal flux converges to -<p_w n, psi>.
        const PairingValue t = pair_wall_pressure(field, body, phi.section(), spec);
        res.target = -t.value;
        res.target_err = t.quad_error;
    } else if (target_kind == "zero") {
        res.target = 0.0;
    } else {
        throw ConfigError("unknown sweep target: " + target_kind);
    }

    res.points.resize(h_list.size());
    parallel_for(h_list.size(), threads, [&](std::size_t i) {
        ScaleSweepPoint& pt = res.points[i];
        pt.h = h_list[i];
        pt.ell = ell_ratio * h_list[i];
        try {
            pt.flux = momentum_flux_pairing(field, body, pt.h, pt.ell, phi, spec);
            pt.gap_abs = std::fabs(pt.flux.value - res.target);
            pt.gap_rel = pt.gap_abs / std::max(std::fabs(res.target), 1e-30);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    });

    std::vector<double> hs, gaps, errs, fluxes;
    for (const auto& pt : res.points) {
        if (!pt.ok) continue;
        hs.push_back(pt.h);
        gaps.push_back(pt.gap_abs);
        errs.push_back(pt.flux.quad_error + res.target_err);
        fluxes.push_back(pt.flux.value);
    }
    res.gap_fit = fit_rate(hs, gaps, errs);
    const double p = res.gap_fit.valid ? res.gap_fit.exponent : 1.0;
    res.limit_estimate = richardson_limit(hs, fluxes, p);
    res.limit_gap_abs = std::fabs(res.limit_estimate - res.target);
    res.limit_gap_rel = res.limit_gap_abs / std::max(std::fabs(res.target), 1e-30);
    return res;
}

// ---------------------------------------------------------------------------
// Viscosity sweep
// ---------------------------------------------------------------------------

ViscositySweepResult run_viscosity_sweep(
    const std::function<std::shared_ptr<FlowField>(double)>& family, const Body& body,
    const SurfaceSection& tangential, const SurfaceSection& normal,
    const std::vector<double>& nu_list, const QuadratureSpec& spec, int threads) {
    if (nu_list.empty()) throw ConfigError("viscosity sweep needs a nonempty nu list");
    ViscositySweepResult res;
    res.section_id = tangential.id;
    res.points.resize(nu_list.size());
    parallel_for(nu_list.size(), threads, [&](std::size_t i) {
        ViscositySweepPoint& pt = res.points[i];
        pt.nu = nu_list[i];
        try {
            const std::shared_ptr<FlowField> f = family(nu_list[i]);
            const PairingValue tau = pair_wall_shear(*f, body, tangential, spec);
            const PairingValue pw = pair_wall_pressure(*f, body, normal, spec);
            pt.tau_pairing = tau.value;
            pt.tau_err = tau.quad_error;
            pt.pressure_pairing = pw.value;
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    });
    std::vector<double> nus, taus, errs;
    for (const auto& pt : res.points) {
        if (!pt.ok) continue;
        nus.push_back(pt.nu);
        taus.push_back(pt.tau_pairing);
        errs.push_back(pt.tau_err);
    }
    for (std::size_t i = 1; i < taus.size(); ++i)
        res.cauchy.push_back(std::fabs(taus[i] - taus[i - 1]));
    res.tau_fit = fit_rate(nus, taus, errs);
    const double p = res.tau_fit.valid ? std::max(res.tau_fit.exponent, 0.25) : 1.0;
    res.tau_limit_estimate = richardson_limit(nus, taus, p);
    return res;
}

// ---------------------------------------------------------------------------
// Hypothesis-norm estimators
// ---------------------------------------------------------------------------

namespace {

struct ShellSup {
    double max_value = 0.0;
    double lipschitz = 0.0;
};

/// Sup over shell nodes of a pointwise magnitude with its gradient bound.
template <typename FValue, typename FGrad>
ShellSup shell_sup(const ShellQuadrature& q, FValue&& value, FGrad&& grad_bound) {
    ShellSup s;
    for (std::size_t i = 0; i < q.size(); ++i) {
        s.max_value = std::max(s.max_value, value(i));
        s.lipschitz = std::max(s.lipschitz, grad_bound(i));
    }
    return s;
}

double node_spacing_estimate(const Body& body, double band, int surf_order, int radial_order) {
    const auto bb = body.bounding_box();
    const double r_eff = 0.5 * std::max({bb[1].x - bb[0].x, bb[1].y - bb[0].y,
                                         bb[1].z - bb[0].z});
    return std::max(M_PI * r_eff / surf_order, 2.0 * band / std::max(radial_order, 1));
}

template <typename FSup>
NormInterval l2_in_time(const FlowField& field, double horizon, int time_order, FSup&& sup_at) {
    if (field.steady()) {
        const auto s = sup_at(0.5 * horizon);
        return {s.lower * std::sqrt(horizon), s.upper * std::sqrt(horizon)};
    }
    const GaussRule& gr = gauss_legendre(time_order);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < time_order; ++i) {
        const double t = 0.5 * horizon * (1.0 + gr.nodes[i]);
        const double w = 0.5 * horizon * gr.weights[i];
        const auto s = sup_at(t);
        lo += w * s.lower * s.lower;
        hi += w * s.upper * s.upper;
    }
    return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

namespace {

/// Tube rule for sup estimators, split at the field's layer breakpoints so
/// thin near-wall structure is sampled.
ShellQuadrature sup_tube_rule(const FlowField& field, const Body& body, double delta,
                              const QuadratureSpec& spec) {
    std::vector<double> cuts{0.0, delta};
    for (double b : field.radial_breakpoints())
        if (b > 1e-14 && b < delta - 1e-14) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    ShellQuadrature out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        ShellQuadrature part =
            cuts[k] <= 0.0 ? body.tube_quadrature(cuts[k + 1], spec.surface_order,
                                                  spec.shell_radial_order)
                           : body.shell_quadrature(cuts[k], cuts[k + 1] - cuts[k],
                                                   spec.surface_order, spec.shell_radial_order);
        out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
        out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
        out.dist.insert(out.dist.end(), part.dist.begin(), part.dist.end());
        out.foot.insert(out.foot.end(), part.foot.begin(), part.foot.end());
        out.normals.insert(out.normals.end(), part.normals.begin(), part.normals.end());
    }
    out.h_hi = delta;
    return out;
}

}  // namespace

std::vector<NormCurvePoint> estimate_no_flow_through(const FlowField& field, const Body& body,
                                                     const std::vector<double>& delta_list,
                                                     const QuadratureSpec& spec) {
    std::vector<NormCurvePoint> curve;
    for (double delta : delta_list) {
        if (delta >= body.tubular_radius())
            throw DomainError("probe distance exceeds tubular neighborhood");
        const ShellQuadrature q = sup_tube_rule(field, body, delta, spec);
        const double spacing =
            node_spacing_estimate(body, delta, spec.surface_order, spec.shell_radial_order);
        auto sup_at = [&](double t) {
            const ShellSup s = shell_sup(
                q,
                [&](std::size_t i) {
                    return std::fabs(dot(q.normals[i], field.velocity(q.nodes[i], t)));
                },
                [&](std::size_t i) {
                    const Mat3 g = field.velocity_grad(q.nodes[i], t);
                    const Mat3 hd = body.distance_hessian(q.nodes[i]);
                    const Vec3 gn = vecmat(q.normals[i], g) + hd * field.velocity(q.nodes[i], t);
                    return norm(gn);
                });
            return NormInterval{s.max_value, s.max_value + s.lipschitz * spacing};
        };
        NormCurvePoint pt;
        pt.delta = delta;
        pt.value = l2_in_time(field, field.horizon(), spec.time_order, sup_at);
        curve.push_back(pt);
    }
    return curve;
}

NormInterval estimate_near_wall_sup(const FlowField& field, const Body& body, double eps,
                                    const QuadratureSpec& spec) {
    if (eps >= body.tubular_radius())
        throw DomainError("probe distance exceeds tubular neighborhood");
    const ShellQuadrature q = sup_tube_rule(field, body, eps, spec);
    const double spacing =
        node_spacing_estimate(body, eps, spec.surface_order, spec.shell_radial_order);
    auto sup_at = [&](double t) {
        const ShellSup s = shell_sup(
            q, [&](std::size_t i) { return norm(field.velocity(q.nodes[i], t)); },
            [&](std::size_t i) { return std::sqrt(ddot(field.velocity_grad(q.nodes[i], t),
                                                        field.velocity_grad(q.nodes[i], t))); });
        return NormInterval{s.max_value, s.max_value + s.lipschitz * spacing};
    };
    return l2_in_time(field, field.horizon(), spec.time_order, sup_at);
}

// ---------------------------------------------------------------------------
// Windowed mollification convergence (wall annulus)
// ---------------------------------------------------------------------------

std::vector<FilterCurvePoint> filter_convergence_curve(
    const std::function<double(const Vec3&, double)>& f, bool f_steady, const FlowField* field,
    const Body& body, double d0, double d1, const std::vector<double>& h_list, double ell_ratio,
    int p, const QuadratureSpec& spec, double horizon) {
    if (p != 1 && p != 2) throw ConfigError("filter convergence norm needs p in {1,2}");
    if (!(d0 >= 0.0 && d0 < d1 && d1 < body.tubular_radius()))
        throw ConfigError("annulus out of range");

    std::vector<FilterCurvePoint> curve;
    for (double h : h_list) {
        const double l = ell_ratio * h;
        const MollifierKernel kernel(spec.ball_radial_order, spec.ball_sphere_order);
        const WindowProfile window{h, l};

        // Panels split at the window breakpoints inside [d0, d1].
        std::vector<double> cuts{d0};
        for (double c : {h, h + l})
            if (c > d0 + 1e-14 && c < d1 - 1e-14) cuts.push_back(c);
        cuts.push_back(d1);

        auto spatial_norm = [&](double t) {
            double acc = 0.0;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                ShellQuadrature q =
                    cuts[k] <= 0.0
                        ? body.tube_quadrature(cuts[k + 1], spec.surface_order,
                                               spec.shell_radial_order)
                        : body.shell_quadrature(cuts[k], cuts[k + 1] - cuts[k],
                                                spec.surface_order, spec.shell_radial_order);
                for (std::size_t i = 0; i < q.size(); ++i) {
                    const double d = q.dist[i];
                    const double eta = window.value(d);
                    double diff;
                    if (eta == 0.0) {
                        diff = -f(q.nodes[i], t);
                    } else {
                        const double fbar =
                            mollify_scalar(kernel, l, [&](const Vec3& y) { return f(y, t); },
                                           q.nodes[i]);
                        diff = eta * fbar - f(q.nodes[i], t);
                    }
                    acc += q.weights[i] * (p == 2 ? diff * diff : std::fabs(diff));
                }
            }
            return acc;
        };

        double total;
        if (f_steady) {
            total = horizon * spatial_norm(0.5 * horizon);
        } else {
            const GaussRule& gr = gauss_legendre(spec.time_order);
            total = 0.0;
            for (int i = 0; i < spec.time_order; ++i) {
                const double t = 0.5 * horizon * (1.0 + gr.nodes[i]);
                total += 0.5 * horizon * gr.weights[i] * spatial_norm(t);
            }
        }
        FilterCurvePoint pt;
        pt.h = h;
        pt.ell = l;
        pt.norm = p == 2 ? std::sqrt(total) : total;
        curve.push_back(pt);
        (void)field;
    }
    return curve;
}

std::vector<FilterCurvePoint> filter_convergence_curve_component(
    const FlowField& field, const Body& body, int component, double d0, double d1,
    const std::vector<double>& h_list, double ell_ratio, int p, const QuadratureSpec& spec) {
    auto f = [&field, component](const Vec3& x, double t) {
        if (component == 3) return field.pressure(x, t);
        return field.velocity(x, t)[component];
    };
    return filter_convergence_curve(f, field.steady(), &field, body, d0, d1, h_list, ell_ratio,
                                    p, spec, field.horizon());
}

}  // namespace wallflux
