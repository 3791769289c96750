#include "wallflux/budgets.hpp"

#include <algorithm>
#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/profiles.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

namespace {

constexpr double kRelFloor = 1e-30;

void check_finite(const PairingValue& pv) {
    if (!std::isfinite(pv.value)) throw DomainError("pairing value not finite: " + pv.id);
}

struct TimeRule {
    std::vector<double> nodes, weights;
};

TimeRule time_rule(const TimeBump& bump, int order) {
    const GaussRule& gr = gauss_legendre(order);
    TimeRule tr;
    const double mid = 0.5 * (bump.t0 + bump.t1), half = 0.5 * (bump.t1 - bump.t0);
    for (int i = 0; i < order; ++i) {
        tr.nodes.push_back(mid + half * gr.nodes[i]);
        tr.weights.push_back(half * gr.weights[i]);
    }
    return tr;
}

/// Integrate spatial(t) * beta(t) and optionally a companion paired with
/// beta'(t). For steady fields the spatial sums are evaluated once.
template <typename FBeta, typename FBetaPrime>
double integrate_time(const FlowField& field, const TimeBump& bump, int order, FBeta&& with_beta,
                      FBetaPrime&& with_beta_prime) {
    if (field.steady()) {
        const double tmid = 0.5 * (bump.t0 + bump.t1);
        return with_beta(tmid) * bump.integral() + with_beta_prime(tmid) * 0.0;
    }
    const TimeRule tr = time_rule(bump, order);
    double acc = 0.0;
    for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
        const double t = tr.nodes[i];
        acc += tr.weights[i] *
               (bump.value(t) * with_beta(t) + bump.deriv(t) * with_beta_prime(t));
    }
    return acc;
}

/// Tube rule over (0, eps) split into radial panels: a default split resolves
/// the flat tail of the extension weight, and field-specific breakpoints
/// (layer edges) add panel boundaries.
ShellQuadrature tube_panels(const Body& body, double eps, int surf_order, int radial_order,
                            const std::vector<double>& breakpoints = {}) {
    std::vector<double> cuts{0.0, 0.6 * eps, eps};
    for (double b : breakpoints)
        if (b > 1e-12 && b < eps - 1e-12) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
               cuts.end());
    ShellQuadrature out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        ShellQuadrature part =
            cuts[k] <= 0.0
                ? body.tube_quadrature(cuts[k + 1], surf_order, radial_order)
                : body.shell_quadrature(cuts[k], cuts[k + 1] - cuts[k], surf_order, radial_order);
        out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
        out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
        out.dist.insert(out.dist.end(), part.dist.begin(), part.dist.end());
        out.foot.insert(out.foot.end(), part.foot.begin(), part.foot.end());
        out.normals.insert(out.normals.end(), part.normals.begin(), part.normals.end());
    }
    out.h_lo = 0.0;
    out.h_hi = eps;
    return out;
}

double reduce(const std::vector<double>& w, const std::vector<double>& v) {
    return kernels::weighted_sum(w.data(), v.data(), w.size());
}

}  // namespace

QuadratureSpec QuadratureSpec::refined() const { return scaled(1.5); }

QuadratureSpec QuadratureSpec::scaled(double f) const {
    auto up = [f](int n) { return static_cast<int>(std::ceil(n * f)); };
    QuadratureSpec r = *this;
    r.surface_order = up(surface_order);
    r.radial_order = up(radial_order);
    r.shell_radial_order = up(shell_radial_order);
    r.time_order = up(time_order);
    r.ball_radial_order = up(ball_radial_order);
    r.ball_sphere_order = up(ball_sphere_order);
    return r;
}

IdentityResidual make_identity_residual(std::string id, std::string op, std::string field_id,
                                        std::string section_id, double left_base,
                                        double right_base, double left_ref, double right_ref) {
    IdentityResidual r;
    r.id = std::move(id);
    r.op = std::move(op);
    r.field_id = std::move(field_id);
    r.section_id = std::move(section_id);
    r.left = left_ref;
    r.right = right_ref;
    r.abs_residual = std::fabs(left_ref - right_ref);
    r.abs_residual_base = std::fabs(left_base - right_base);
    const double scale = std::max({std::fabs(left_ref), std::fabs(right_ref), kRelFloor});
    r.rel_residual = r.abs_residual / scale;
    r.left_err = std::fabs(left_ref - left_base);
    r.right_err = std::fabs(right_ref - right_base);
    // Verdict against 10x the refinement error estimates, with a roundoff
    // floor; never a fixed absolute number alone.
    r.tolerance = std::max(10.0 * std::max(r.left_err, r.right_err),
                           1e-13 * std::max(scale, 1.0));
    r.pass = r.abs_residual <= r.tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Wall pairings
// ---------------------------------------------------------------------------

namespace {

double wall_shear_value(const FlowField& field, const Body& body, const SurfaceSection& psi,
                        const QuadratureSpec& spec) {
    if (field.viscosity() == 0.0) return 0.0;
    const SurfaceQuadrature sq = body.surface_quadrature(spec.surface_order);
    std::vector<double> contrib(sq.size());
    auto spatial_sum = [&](double t) {
        for (std::size_t i = 0; i < sq.size(); ++i) {
            const Vec3 tau = wall_shear_stress(field, body, sq.nodes[i], t);
            contrib[i] = dot(tau, psi.spatial(sq.nodes[i]));
        }
        return reduce(sq.weights, contrib);
    };
    return integrate_time(field, psi.bump, spec.time_order, spatial_sum,
                          [](double) { return 0.0; });
}

double wall_pressure_value(const FlowField& field, const Body& body, const SurfaceSection& psi,
                           const QuadratureSpec& spec) {
    const SurfaceQuadrature sq = body.surface_quadrature(spec.surface_order);
    std::vector<double> sigma(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sigma[i] = psi.normal_scalar(sq.nodes[i]);
    std::vector<double> contrib(sq.size());
    auto spatial_sum = [&](double t) {
        for (std::size_t i = 0; i < sq.size(); ++i)
            contrib[i] = field.wall_pressure(body, sq.nodes[i], t) * sigma[i];
        return reduce(sq.weights, contrib);
    };
    return integrate_time(field, psi.bump, spec.time_order, spatial_sum,
                          [](double) { return 0.0; });
}

}  // namespace

PairingValue pair_wall_shear(const FlowField& field, const Body& body, const SurfaceSection& psi,
                             const QuadratureSpec& spec) {
    if (psi.kind != SurfaceSection::Kind::Tangential)
        throw DomainError("pair_wall_shear requires a tangential section");
    PairingValue pv;
    pv.op = "pair_wall_shear";
    pv.id = "tau_w:" + psi.id;
    pv.field_id = field.id();
    pv.section_id = psi.id;
    pv.nu = field.viscosity();
    const double base = wall_shear_value(field, body, psi, spec);
    const double ref = wall_shear_value(field, body, psi, spec.refined());
    pv.value = ref;
    pv.quad_error = std::fabs(ref - base);
    pv.nodes = static_cast<std::size_t>(spec.surface_order) * 2 * spec.surface_order;
    check_finite(pv);
    return pv;
}

PairingValue pair_wall_pressure(const FlowField& field, const Body& body,
                                const SurfaceSection& psi, const QuadratureSpec& spec) {
    if (psi.kind != SurfaceSection::Kind::Normal)
        throw DomainError("pair_wall_pressure requires a normal section");
    PairingValue pv;
    pv.op = "pair_wall_pressure";
    pv.id = "p_w:" + psi.id;
    pv.field_id = field.id();
    pv.section_id = psi.id;
    pv.nu = field.viscosity();
    const double base = wall_pressure_value(field, body, psi, spec);
    const double ref = wall_pressure_value(field, body, psi, spec.refined());
    pv.value = ref;
    pv.quad_error = std::fabs(ref - base);
    pv.nodes = static_cast<std::size_t>(spec.surface_order) * 2 * spec.surface_order;
    check_finite(pv);
    return pv;
}

// ---------------------------------------------------------------------------
// Weak interior functional
// ---------------------------------------------------------------------------

namespace {

double weak_interior_value(const FlowField& field, const Body& body,
                           const ExtendedTestField& phi, const QuadratureSpec& spec) {
    const ShellQuadrature rule = tube_panels(body, phi.epsilon(), spec.surface_order,
                                             spec.radial_order, field.radial_breakpoints());
    const std::size_t n = rule.size();
    std::vector<ExtendedTestField::SpatialBundle> bundle(n);
    for (std::size_t i = 0; i < n; ++i) bundle[i] = phi.spatial(rule.nodes[i]);

    const double nu = field.viscosity();
    const bool forced = field.residual_class() != ResidualClass::EulerExact;
    std::vector<double> c_rest(n), c_dt(n);

    auto fill = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& x = rule.nodes[i];
            const auto& b = bundle[i];
            const Vec3 u = field.velocity(x, t);
            const double p = field.pressure(x, t);
            double rest = dot(u, b.grad * u) + p * b.divergence;
            if (nu != 0.0) rest += nu * dot(u, b.laplacian);
            if (forced) rest += dot(field.forcing(x, t), b.value);
            c_rest[i] = rest;
            c_dt[i] = dot(u, b.value);
        }
    };

    if (field.steady()) {
        const double tmid = 0.5 * (phi.section().bump.t0 + phi.section().bump.t1);
        fill(tmid);
        // Steady: the dt pairing integrates beta' over its full support, which
        // vanishes identically; only the beta-weighted block survives.
        return -reduce(rule.weights, c_rest) * phi.section().bump.integral();
    }
    const TimeRule tr = time_rule(phi.section().bump, spec.time_order);
    double acc = 0.0;
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        const double t = tr.nodes[k];
        fill(t);
        acc += tr.weights[k] * (phi.section().bump.value(t) * (-reduce(rule.weights, c_rest)) +
                                phi.section().bump.deriv(t) * (-reduce(rule.weights, c_dt)));
    }
    return acc;
}

}  // namespace

PairingValue weak_interior_functional(const FlowField& field, const Body& body,
                                      const ExtendedTestField& phi, const QuadratureSpec& spec) {
    PairingValue pv;
    pv.op = "weak_interior_functional";
    pv.id = "interior:" + phi.section().id;
    pv.field_id = field.id();
    pv.section_id = phi.section().id;
    pv.extension = phi.has_drift() ? "drift" : "canonical";
    pv.nu = field.viscosity();
    const double base = weak_interior_value(field, body, phi, spec);
    const double ref = weak_interior_value(field, body, phi, spec.refined());
    pv.value = ref;
    pv.quad_error = std::fabs(ref - base);
    check_finite(pv);
    return pv;
}

IdentityResidual identity_residual_tangential(const FlowField& field, const Body& body,
                                              const ExtendedTestField& phi,
                                              const QuadratureSpec& spec) {
    if (phi.section().kind != SurfaceSection::Kind::Tangential)
        throw DomainError("tangential identity requires a tangential section");
    const double lb = weak_interior_value(field, body, phi, spec);
    const double rb = -wall_shear_value(field, body, phi.section(), spec);
    const QuadratureSpec fine = spec.refined();
    const double lr = weak_interior_value(field, body, phi, fine);
    const double rr = -wall_shear_value(field, body, phi.section(), fine);
    return make_identity_residual("momentum_tangential:" + phi.section().id,
                                  "identity_residual_tangential", field.id(), phi.section().id,
                                  lb, rb, lr, rr);
}

IdentityResidual identity_residual_normal(const FlowField& field, const Body& body,
                                          const ExtendedTestField& phi,
                                          const QuadratureSpec& spec) {
    if (phi.section().kind != SurfaceSection::Kind::Normal)
        throw DomainError("normal identity requires a normal section");
    const double lb = weak_interior_value(field, body, phi, spec);
    const double rb = wall_pressure_value(field, body, phi.section(), spec);
    const QuadratureSpec fine = spec.refined();
    const double lr = weak_interior_value(field, body, phi, fine);
    const double rr = wall_pressure_value(field, body, phi.section(), fine);
    return make_identity_residual("momentum_normal:" + phi.section().id,
                                  "identity_residual_normal", field.id(), phi.section().id, lb,
                                  rb, lr, rr);
}

// ---------------------------------------------------------------------------
// Momentum flux pairing across the transition shell
// ---------------------------------------------------------------------------

namespace {

struct FluxParts {
    double advective = 0.0;
    double pressure = 0.0;
};

FluxParts flux_pairing_parts(const FlowField& field, const Body& body, double h, double l,
                             const ExtendedTestField& phi, const QuadratureSpec& spec) {
    if (!(l > 0.0 && l < h)) throw DomainError("flux pairing requires 0 < l < h");
    if (h + l >= phi.epsilon()) throw DomainError("transition band exits extension support");
    const ShellQuadrature shell =
        body.shell_quadrature(h, l, spec.surface_order, spec.shell_radial_order);
    const MollifierKernel kernel(spec.ball_radial_order, spec.ball_sphere_order);
    const WindowProfile window{h, l};
    const std::size_t n = shell.size();

    std::vector<Vec3> phiv(n);
    std::vector<double> thetap(n);
    for (std::size_t i = 0; i < n; ++i) {
        phiv[i] = phi.value_spatial(shell.nodes[i]);
        thetap[i] = window.deriv(shell.dist[i]);
    }

    std::vector<double> c_adv(n), c_pres(n);
    auto spatial = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            const FilteredState f =
                mollify_state_unchecked(kernel, l, field, shell.nodes[i], t);
            const Vec3& nn = shell.normals[i];
            c_adv[i] = thetap[i] * dot(f.stress * nn, phiv[i]);
            c_pres[i] = thetap[i] * f.p * dot(phiv[i], nn);
        }
        return FluxParts{reduce(shell.weights, c_adv), reduce(shell.weights, c_pres)};
    };

    const TimeBump& bump = phi.section().bump;
    if (field.steady()) {
        const FluxParts parts = spatial(0.5 * (bump.t0 + bump.t1));
        return {-parts.advective * bump.integral(), -parts.pressure * bump.integral()};
    }
    const TimeRule tr = time_rule(bump, spec.time_order);
    FluxParts acc;
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        const FluxParts parts = spatial(tr.nodes[k]);
        acc.advective -= tr.weights[k] * bump.value(tr.nodes[k]) * parts.advective;
        acc.pressure -= tr.weights[k] * bump.value(tr.nodes[k]) * parts.pressure;
    }
    return acc;
}

}  // namespace

PairingValue momentum_flux_pairing(const FlowField& field, const Body& body, double h, double l,
                                   const ExtendedTestField& phi, const QuadratureSpec& spec) {
    PairingValue pv;
    pv.op = "momentum_flux_pairing";
    pv.id = "flux:" + phi.section().id;
    pv.field_id = field.id();
    pv.section_id = phi.section().id;
    pv.extension = phi.has_drift() ? "drift" : "canonical";
    pv.nu = field.viscosity();
    pv.h = h;
    pv.ell = l;
    const FluxParts base = flux_pairing_parts(field, body, h, l, phi, spec);
    const FluxParts ref = flux_pairing_parts(field, body, h, l, phi, spec.refined());
    pv.advective = ref.advective;
    pv.pressure = ref.pressure;
    pv.value = ref.advective + ref.pressure;
    pv.quad_error = std::fabs(pv.value - (base.advective + base.pressure));
    pv.nodes = static_cast<std::size_t>(spec.surface_order) * 2 * spec.surface_order *
               spec.shell_radial_order;
    check_finite(pv);
    return pv;
}

// ---------------------------------------------------------------------------
// Coarse-grained windowed budget
// ---------------------------------------------------------------------------

namespace {

ShellQuadrature band_panels(const Body& body, double h, double l, double eps,
                            const QuadratureSpec& spec,
                            const std::vector<double>& breakpoints) {
    ShellQuadrature a = body.shell_quadrature(h, l, spec.surface_order, spec.shell_radial_order);
    std::vector<double> cuts{h + l, std::max(0.7 * eps, h + l + 0.25 * (eps - h - l)), eps};
    for (double b : breakpoints)
        if (b > h + l + 1e-12 && b < eps - 1e-12) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
               cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const ShellQuadrature part = body.shell_quadrature(
            cuts[k], cuts[k + 1] - cuts[k], spec.surface_order, spec.radial_order);
        a.nodes.insert(a.nodes.end(), part.nodes.begin(), part.nodes.end());
        a.weights.insert(a.weights.end(), part.weights.begin(), part.weights.end());
        a.dist.insert(a.dist.end(), part.dist.begin(), part.dist.end());
        a.foot.insert(a.foot.end(), part.foot.begin(), part.foot.end());
        a.normals.insert(a.normals.end(), part.normals.begin(), part.normals.end());
    }
    a.h_hi = eps;
    return a;
}

double cg_interior_value(const FlowField& field, const Body& body, double h, double l,
                         const ExtendedTestField& phi, const QuadratureSpec& spec) {
    const double eps = phi.epsilon();
    const ShellQuadrature rule =
        band_panels(body, h, l, eps, spec, field.radial_breakpoints());
    const MollifierKernel kernel(spec.ball_radial_order, spec.ball_sphere_order);
    const WindowProfile window{h, l};
    const std::size_t n = rule.size();

    std::vector<ExtendedTestField::SpatialBundle> bundle(n);
    std::vector<double> eta(n);
    for (std::size_t i = 0; i < n; ++i) {
        bundle[i] = phi.spatial(rule.nodes[i]);
        eta[i] = window.value(rule.dist[i]);
    }

    const double nu = field.viscosity();
    const bool forced = field.residual_class() != ResidualClass::EulerExact;
    std::vector<double> c_beta(n), c_dt(n);

    auto fill = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& x = rule.nodes[i];
            const FilteredState f = mollify_state_unchecked(kernel, l, field, x, t);
            const auto& b = bundle[i];
            double with_beta = eta[i] * (ddot(b.grad, f.stress) + f.p * b.divergence);
            if (nu != 0.0) {
                const Vec3 lap_bar = mollify_vector(
                    kernel, l,
                    [&](const Vec3& y) { return field.velocity_laplacian(y, t); }, x);
                with_beta += nu * eta[i] * dot(b.value, lap_bar);
            }
            if (forced) {
                const Vec3 g_bar = mollify_vector(
                    kernel, l, [&](const Vec3& y) { return field.forcing(y, t); }, x);
                with_beta += eta[i] * dot(b.value, g_bar);
            }
            c_beta[i] = with_beta;
            c_dt[i] = eta[i] * dot(b.value, f.u);
        }
    };

    const TimeBump& bump = phi.section().bump;
    if (field.steady()) {
        fill(0.5 * (bump.t0 + bump.t1));
        return reduce(rule.weights, c_beta) * bump.integral();
    }
    const TimeRule tr = time_rule(bump, spec.time_order);
    double acc = 0.0;
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        const double t = tr.nodes[k];
        fill(t);
        acc += tr.weights[k] * (bump.value(t) * reduce(rule.weights, c_beta) +
                                bump.deriv(t) * reduce(rule.weights, c_dt));
    }
    return acc;
}

}  // namespace

IdentityResidual coarse_grained_budget_residual(const FlowField& field, const Body& body,
                                                double h, double l,
                                                const ExtendedTestField& phi,
                                                const QuadratureSpec& spec) {
    // The windowed interior terms balance the pairing of the wall-directed
    // flux: with flux_pairing_parts already carrying the flux sign, the right
    // side is the pairing value itself.
    const double lb = cg_interior_value(field, body, h, l, phi, spec);
    const FluxParts fb = flux_pairing_parts(field, body, h, l, phi, spec);
    const QuadratureSpec fine = spec.refined();
    const double lr = cg_interior_value(field, body, h, l, phi, fine);
    const FluxParts fr = flux_pairing_parts(field, body, h, l, phi, fine);
    return make_identity_residual("cg_budget:" + phi.section().id,
                                  "coarse_grained_budget_residual", field.id(),
                                  phi.section().id, lb, fb.advective + fb.pressure, lr,
                                  fr.advective + fr.pressure);
}

// ---------------------------------------------------------------------------
// Vorticity-source balance (step1 vs step2)
// ---------------------------------------------------------------------------

namespace {

struct LighthillSides {
    double step1 = 0.0;
    double step2 = 0.0;
};

LighthillSides lighthill_sides(const FlowField& field, const Body& body, double h, double l,
                               const ExtendedTestField& phi, const QuadratureSpec& spec) {
    if (!(l > 0.0 && l < h)) throw DomainError("lighthill balance requires 0 < l < h");
    if (h + l >= phi.epsilon()) throw DomainError("transition band exits extension support");
    const ShellQuadrature shell =
        body.shell_quadrature(h, l, spec.surface_order, spec.shell_radial_order);
    const MollifierKernel kernel(spec.ball_radial_order, spec.ball_sphere_order);
    const WindowProfile window{h, l};
    const std::size_t n = shell.size();
    const double etaT = 3e-4 * phi.epsilon();

    std::vector<ExtendedTestField::SpatialBundle> bundle(n);
    std::vector<double> thetap(n);
    for (std::size_t i = 0; i < n; ++i) {
        bundle[i] = phi.spatial(shell.nodes[i]);
        thetap[i] = window.deriv(shell.dist[i]);
    }

    const double nu = field.viscosity();
    const bool forced = field.residual_class() != ResidualClass::EulerExact;
    std::vector<double> c1(n), c2_beta(n), c2_dt(n);

    auto fill = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& x = shell.nodes[i];
            const Vec3& nn = shell.normals[i];
            const auto& b = bundle[i];
            const FilteredState f = mollify_state_unchecked(kernel, l, field, x, t);
            c1[i] = thetap[i] * f.p * dot(b.curl, nn);

            const Vec3 divT = filtered_stress_divergence_fd(kernel, l, field, x, t, etaT);
            double with_beta = dot(b.value, thetap[i] * cross(nn, divT));
            if (nu != 0.0) {
                const Vec3 lap_bar = mollify_vector(
                    kernel, l,
                    [&](const Vec3& y) { return field.velocity_laplacian(y, t); }, x);
                with_beta -= nu * dot(b.value, thetap[i] * cross(nn, lap_bar));
            }
            if (forced) {
                const Vec3 g_bar = mollify_vector(
                    kernel, l, [&](const Vec3& y) { return field.forcing(y, t); }, x);
                with_beta -= dot(b.value, thetap[i] * cross(nn, g_bar));
            }
            c2_beta[i] = with_beta;
            c2_dt[i] = -dot(b.value, thetap[i] * cross(nn, f.u));
        }
    };

    const TimeBump& bump = phi.section().bump;
    LighthillSides out;
    if (field.steady()) {
        fill(0.5 * (bump.t0 + bump.t1));
        out.step1 = reduce(shell.weights, c1) * bump.integral();
        out.step2 = reduce(shell.weights, c2_beta) * bump.integral();
        return out;
    }
    const TimeRule tr = time_rule(bump, spec.time_order);
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        const double t = tr.nodes[k];
        fill(t);
        out.step1 += tr.weights[k] * bump.value(t) * reduce(shell.weights, c1);
        out.step2 += tr.weights[k] * (bump.value(t) * reduce(shell.weights, c2_beta) +
                                      bump.deriv(t) * reduce(shell.weights, c2_dt));
    }
    return out;
}

}  // namespace

LighthillBalance lighthill_balance(const FlowField& field, const Body& body, double h, double l,
                                   const ExtendedTestField& phi, const QuadratureSpec& spec) {
    if (phi.section().kind != SurfaceSection::Kind::Tangential)
        throw DomainError("lighthill balance requires a tangential section");
    const LighthillSides base = lighthill_sides(field, body, h, l, phi, spec);
    const LighthillSides ref = lighthill_sides(field, body, h, l, phi, spec.refined());
    LighthillBalance out;
    out.step1.op = "lighthill_step1";
    out.step1.id = "lighthill1:" + phi.section().id;
    out.step1.field_id = field.id();
    out.step1.section_id = phi.section().id;
    out.step1.nu = field.viscosity();
    out.step1.h = h;
    out.step1.ell = l;
    out.step1.value = ref.step1;
    out.step1.quad_error = std::fabs(ref.step1 - base.step1);
    out.step2 = out.step1;
    out.step2.op = "lighthill_step2";
    out.step2.id = "lighthill2:" + phi.section().id;
    out.step2.value = ref.step2;
    out.step2.quad_error = std::fabs(ref.step2 - base.step2);
    out.residual =
        make_identity_residual("lighthill:" + phi.section().id, "lighthill_balance", field.id(),
                               phi.section().id, base.step1, base.step2, ref.step1, ref.step2);
    check_finite(out.step1);
    check_finite(out.step2);
    return out;
}

// ---------------------------------------------------------------------------
// Weak Neumann pressure identity
// ---------------------------------------------------------------------------

double ScalarBumpTest::value(const Vec3& x) const {
    const double d = body->distance(x);
    if (d >= support) return 0.0;
    return cutoff_exp(d / support) * (1.0 + mod_amp * dot(mod_dir, x));
}

Vec3 ScalarBumpTest::grad(const Vec3& x) const {
    const double d = body->distance(x);
    if (d >= support) return {};
    const Vec3 n = body->normal_at(body->project(x));
    const double g = 1.0 + mod_amp * dot(mod_dir, x);
    return (cutoff_exp_deriv(d / support) / support) * g * n +
           cutoff_exp(d / support) * mod_amp * mod_dir;
}

Mat3 ScalarBumpTest::hessian(const Vec3& x) const {
    const double d = body->distance(x);
    if (d >= support) return {};
    const Vec3 n = body->normal_at(body->project(x));
    const Mat3 hd = body->distance_hessian(x);
    const double g = 1.0 + mod_amp * dot(mod_dir, x);
    const double wp = cutoff_exp_deriv(d / support) / support;
    const double wpp = cutoff_exp_deriv2(d / support) / (support * support);
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.m[i][j] = wpp * n[i] * n[j] * g + wp * hd.m[i][j] * g +
                          wp * mod_amp * (n[i] * mod_dir[j] + n[j] * mod_dir[i]);
    return out;
}

double ScalarBumpTest::laplacian(const Vec3& x) const {
    const double d = body->distance(x);
    if (d >= support) return 0.0;
    const Vec3 n = body->normal_at(body->project(x));
    const double g = 1.0 + mod_amp * dot(mod_dir, x);
    const double wp = cutoff_exp_deriv(d / support) / support;
    const double wpp = cutoff_exp_deriv2(d / support) / (support * support);
    return wpp * g + wp * body->laplacian_distance(x) * g + 2.0 * wp * mod_amp * dot(n, mod_dir);
}

namespace {

struct NeumannSides {
    double volume = 0.0;
    double surface = 0.0;
};

NeumannSides neumann_sides(const FlowField& field, const Body& body, const ScalarBumpTest& test,
                           double t, const QuadratureSpec& spec) {
    const ShellQuadrature rule = tube_panels(body, test.support, spec.surface_order,
                                             spec.radial_order, field.radial_breakpoints());
    std::vector<double> contrib(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Vec3& x = rule.nodes[i];
        const Vec3 u = field.velocity(x, t);
        contrib[i] = field.pressure(x, t) * test.laplacian(x) + dot(u, test.hessian(x) * u);
    }
    NeumannSides out;
    out.volume = reduce(rule.weights, contrib);
    const SurfaceQuadrature sq = body.surface_quadrature(spec.surface_order);
    std::vector<double> surf(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        // Outward normal of the fluid domain at the wall is -n.
        const double dphi_dnu = -dot(test.grad(sq.nodes[i]), sq.normals[i]);
        surf[i] = field.wall_pressure(body, sq.nodes[i], t) * dphi_dnu;
    }
    out.surface = reduce(sq.weights, surf);
    return out;
}

}  // namespace

IdentityResidual pressure_weak_neumann_residual(const FlowField& field, const Body& body,
                                                const ScalarBumpTest& test, double t,
                                                const QuadratureSpec& spec) {
    if (field.viscosity() != 0.0)
        throw DomainError("weak Neumann identity requires an inviscid field");
    if (test.support >= body.tubular_radius())
        throw DomainError("scalar test support exceeds quadrature coverage");
    const NeumannSides base = neumann_sides(field, body, test, t, spec);
    const NeumannSides ref = neumann_sides(field, body, test, t, spec.refined());
    return make_identity_residual("weak_neumann", "pressure_weak_neumann_residual", field.id(),
                                  "scalar_bump", base.volume, base.surface, ref.volume,
                                  ref.surface);
}

}  // namespace wallflux
