#include "wallflux/runner.hpp"

#include <chrono>
#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/fd.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/parallel.hpp"
#include "wallflux/sweeps.hpp"

namespace wallflux {

namespace {

// Small deterministic generator for spot-check points (config seed).
struct SplitMix {
    unsigned long long state;
    double next01() {
        state += 0x9e3779b97f4a7c15ull;
        unsigned long long z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

Vec3 random_tube_point(SplitMix& rng, const Body& body) {
    const SurfaceQuadrature sq = body.surface_quadrature(8);
    const std::size_t i = static_cast<std::size_t>(rng.next01() * (sq.size() - 1));
    const double d = (0.1 + 0.8 * rng.next01()) * body.tubular_radius();
    return sq.nodes[i] + d * sq.normals[i];
}

IdentityResidual plain_check(const std::string& id, const std::string& op, double measured,
                             double tolerance) {
    IdentityResidual r;
    r.id = id;
    r.op = op;
    r.left = measured;
    r.right = 0.0;
    r.abs_residual = std::fabs(measured);
    r.abs_residual_base = r.abs_residual;
    r.rel_residual = r.abs_residual;
    r.tolerance = tolerance;
    r.pass = r.abs_residual <= tolerance;
    return r;
}

IdentityResidual geometry_spot_checks(const Body& body, unsigned seed) {
    SplitMix rng{seed * 2654435761ull + 1234567ull};
    double worst = 0.0;
    for (int k = 0; k < 12; ++k) {
        const Vec3 x = random_tube_point(rng, body);
        const double d = body.distance(x);
        const Vec3 foot = body.project(x);
        worst = std::max(worst, std::fabs(d - norm(x - foot)) / (1.0 + d));
        worst = std::max(worst, norm(body.project(foot) - foot));
        // grad d against the transported normal by finite differences.
        const Vec3 n = body.normal_at(foot);
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            const double fd = fd::deriv1([&](double t) { return body.distance(x + t * e); }, 1e-5);
            worst = std::max(worst, std::fabs(fd - n[j]));
        }
    }
    IdentityResidual r = plain_check("geometry_spot_checks", "geometry", worst, 1e-8);
    r.field_id = body.kind();
    return r;
}

struct VerifyContext {
    std::shared_ptr<Body> body;
    std::shared_ptr<FlowField> field;
    std::vector<std::shared_ptr<const SurfaceSection>> sections;
    double epsilon = 0.0;
    double h = 0.0, ell = 0.0;
};

std::shared_ptr<const SurfaceSection> find_section(const VerifyContext& ctx,
                                                   const std::string& id) {
    for (const auto& s : ctx.sections)
        if (s->id == id) return s;
    throw ConfigError("unknown section id: " + id);
}

}  // namespace

ReportDocument cmd_verify(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    kernels::set_backend(cfg.kernel_backend);

    ReportDocument doc;
    doc.command = "verify";
    doc.config_echo = cfg.raw;

    VerifyContext ctx;
    ctx.body = build_body(cfg);
    ctx.field = build_field(cfg, ctx.body);
    ctx.sections = build_sections(cfg, ctx.body);
    ctx.epsilon = extension_epsilon(cfg, *ctx.body);
    ctx.h = cfg.verify_h > 0.0 ? cfg.verify_h : 0.2 * ctx.epsilon;
    ctx.ell = cfg.verify_ell > 0.0 ? cfg.verify_ell : 0.5 * ctx.h;

    std::vector<std::string> ids = cfg.identities;
    if (ids.empty()) {
        ids.push_back("geometry");
        ids.push_back("divergence");
        for (const auto& s : ctx.sections)
            ids.push_back((s->kind == SurfaceSection::Kind::Tangential ? "tangential:"
                                                                       : "normal:") +
                          s->id);
    }

    std::vector<IdentityResidual> results(ids.size());
    std::vector<std::vector<PairingValue>> extra_pairings(ids.size());
    std::vector<std::exception_ptr> errors(ids.size());
    parallel_for(ids.size(), cfg.threads, [&](std::size_t k) {
      try {
        const std::string& id = ids[k];
        const auto colon = id.find(':');
        const std::string op = id.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : id.substr(colon + 1);
        if (op == "geometry") {
            results[k] = geometry_spot_checks(*ctx.body, cfg.seed);
        } else if (op == "divergence") {
            const DivergenceReport rep = check_divergence_free(
                *ctx.field, *ctx.body, 0.0, 0.8 * ctx.body->tubular_radius(),
                cfg.quad.surface_order, cfg.quad.shell_radial_order, 0.5 * cfg.horizon);
            IdentityResidual r =
                plain_check("divergence_free", "check_divergence_free", rep.max_abs,
                            cfg.divergence_tol);
            r.field_id = ctx.field->id();
            results[k] = r;
        } else if (op == "tangential") {
            const auto psi = find_section(ctx, arg);
            const ExtendedTestField phi = extend_tangential(ctx.body, psi, ctx.epsilon);
            results[k] = identity_residual_tangential(*ctx.field, *ctx.body, phi, cfg.quad);
        } else if (op == "normal") {
            const auto psi = find_section(ctx, arg);
            const ExtendedTestField phi = extend_normal(ctx.body, psi, ctx.epsilon);
            results[k] = identity_residual_normal(*ctx.field, *ctx.body, phi, cfg.quad);
        } else if (op == "cg_budget") {
            const auto psi = find_section(ctx, arg);
            const ExtendedTestField phi =
                psi->kind == SurfaceSection::Kind::Tangential
                    ? extend_tangential(ctx.body, psi, ctx.epsilon)
                    : extend_normal(ctx.body, psi, ctx.epsilon);
            results[k] = coarse_grained_budget_residual(*ctx.field, *ctx.body, ctx.h, ctx.ell,
                                                        phi, cfg.quad);
        } else if (op == "lighthill") {
            const auto psi = find_section(ctx, arg);
            const ExtendedTestField phi = extend_tangential(ctx.body, psi, ctx.epsilon);
            const LighthillBalance bal =
                lighthill_balance(*ctx.field, *ctx.body, ctx.h, ctx.ell, phi, cfg.quad);
            results[k] = bal.residual;
            extra_pairings[k].push_back(bal.step1);
            extra_pairings[k].push_back(bal.step2);
        } else if (op == "neumann") {
            ScalarBumpTest test;
            test.body = ctx.body;
            test.support = 0.75 * ctx.epsilon;
            const double vn = norm(cfg.free_stream);
            test.mod_dir = vn > 0.0 ? cfg.free_stream / vn : Vec3{1, 0, 0};
            test.mod_amp = 0.3;
            results[k] = pressure_weak_neumann_residual(*ctx.field, *ctx.body, test,
                                                        0.5 * cfg.horizon, cfg.quad);
        } else {
            throw ConfigError("unknown identity id: " + id);
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (std::size_t k = 0; k < results.size(); ++k) {
        doc.identities.push_back(results[k]);
        for (auto& pv : extra_pairings[k]) doc.pairings.push_back(pv);
        if (!results[k].pass) doc.all_pass = false;
    }

    doc.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return doc;
}

namespace {

void append_scale_sweep(ReportDocument& doc, const RunConfig& cfg, const ScaleSweepResult& res,
                        const std::string& fit_id) {
    for (const auto& pt : res.points) {
        doc.sweep_points.add_row({fit_id, fmt_double(pt.h), fmt_double(pt.flux.value),
                                  fmt_double(pt.gap_abs), fmt_double(pt.gap_rel),
                                  fmt_double(pt.flux.quad_error), pt.ok ? "ok" : pt.error});
        if (pt.ok) doc.pairings.push_back(pt.flux);
    }
    bool pass = true;
    if (cfg.expect_exponent_min > 0.0)
        pass = pass && res.gap_fit.valid && res.gap_fit.exponent >= cfg.expect_exponent_min;
    if (cfg.expect_exponent_tol > 0.0)
        pass = pass && res.gap_fit.valid &&
               std::fabs(res.gap_fit.exponent - cfg.expect_exponent) <= cfg.expect_exponent_tol;
    if (cfg.expect_limit_gap_rel > 0.0) pass = pass && res.limit_gap_rel <= cfg.expect_limit_gap_rel;
    doc.rate_fits.add_row({fit_id, fmt_double(res.gap_fit.exponent),
                           fmt_double(res.gap_fit.exponent_stderr),
                           fmt_double(res.gap_fit.fit_residual),
                           fmt_double(res.gap_fit.points_used), fmt_double(res.limit_estimate),
                           fmt_double(res.target), fmt_double(res.limit_gap_rel),
                           pass ? "pass" : "fail"});
    if (!pass) doc.all_pass = false;
}

}  // namespace

ReportDocument cmd_sweep(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    kernels::set_backend(cfg.kernel_backend);

    ReportDocument doc;
    doc.command = "sweep";
    doc.config_echo = cfg.raw;

    auto body = build_body(cfg);
    auto sections = build_sections(cfg, body);
    const double eps = extension_epsilon(cfg, *body);

    auto find = [&](const std::string& id) -> std::shared_ptr<const SurfaceSection> {
        for (const auto& s : sections)
            if (s->id == id) return s;
        throw ConfigError("unknown section id: " + id);
    };

    if (cfg.sweep_type == "scale") {
        if (cfg.h_list.empty()) throw ConfigError("scale sweep needs sweep.h_list");
        auto field = build_field(cfg, body);
        const auto psi = find(cfg.sweep_section);
        const bool tangential = psi->kind == SurfaceSection::Kind::Tangential;
        std::string target = cfg.sweep_target;
        if (target == "auto") target = tangential ? "wall_shear" : "wall_pressure";
        const ExtendedTestField phi =
            cfg.drift_coeff != 0.0
                ? extend_tangential_drift(body, psi, eps, cfg.drift_coeff, cfg.drift_dir)
                : (tangential ? extend_tangential(body, psi, eps)
                              : extend_normal(body, psi, eps));
        const ScaleSweepResult res = run_scale_sweep(*field, *body, phi, cfg.h_list,
                                                     cfg.ell_ratio, target, cfg.quad,
                                                     cfg.threads);
        append_scale_sweep(doc, cfg, res, "scale:" + psi->id);

        if (cfg.drift_coeff != 0.0) {
            // Pressure component of the drift extension decays linearly in h.
            std::vector<double> hs, pres, errs;
            for (const auto& pt : res.points) {
                if (!pt.ok) continue;
                hs.push_back(pt.h);
                pres.push_back(std::fabs(pt.flux.pressure));
                errs.push_back(pt.flux.quad_error);
            }
            const RateFit pfit = fit_rate(hs, pres, errs);
            bool pass = pfit.valid;
            if (cfg.expect_drift_exponent_tol > 0.0)
                pass = pass && std::fabs(pfit.exponent - 1.0) <= cfg.expect_drift_exponent_tol;
            doc.rate_fits.add_row({"pressure_component:" + psi->id, fmt_double(pfit.exponent),
                                   fmt_double(pfit.exponent_stderr),
                                   fmt_double(pfit.fit_residual), fmt_double(pfit.points_used),
                                   "0", "0", "0", pass ? "pass" : "fail"});
            if (!pass) doc.all_pass = false;
        }
    } else if (cfg.sweep_type == "viscosity") {
        if (cfg.nu_list.empty()) throw ConfigError("viscosity sweep needs sweep.nu_list");
        const auto tangential = find(cfg.sweep_section);
        std::shared_ptr<const SurfaceSection> normal;
        for (const auto& s : sections)
            if (s->kind == SurfaceSection::Kind::Normal) {
                normal = s;
                break;
            }
        if (!normal) throw ConfigError("viscosity sweep needs one normal section");
        auto family = [&](double nu) { return build_field_at_nu(cfg, body, nu); };
        const ViscositySweepResult res = run_viscosity_sweep(
            family, *body, *tangential, *normal, cfg.nu_list, cfg.quad, cfg.threads);
        for (const auto& pt : res.points)
            doc.sweep_points.add_row({"viscosity:" + tangential->id, fmt_double(pt.nu),
                                      fmt_double(pt.tau_pairing),
                                      fmt_double(pt.pressure_pairing),
                                      fmt_double(std::fabs(pt.tau_pairing)),
                                      fmt_double(pt.tau_err), pt.ok ? "ok" : pt.error});
        bool pass = res.tau_fit.valid;
        if (cfg.expect_exponent_tol > 0.0)
            pass = pass &&
                   std::fabs(res.tau_fit.exponent - cfg.expect_exponent) <= cfg.expect_exponent_tol;
        doc.rate_fits.add_row(
            {"viscosity:" + tangential->id, fmt_double(res.tau_fit.exponent),
             fmt_double(res.tau_fit.exponent_stderr), fmt_double(res.tau_fit.fit_residual),
             fmt_double(res.tau_fit.points_used), fmt_double(res.tau_limit_estimate), "0", "0",
             pass ? "pass" : "fail"});
        if (!pass) doc.all_pass = false;

        if (!cfg.delta_list.empty()) {
            auto field = build_field(cfg, body);
            const auto curve = estimate_no_flow_through(*field, *body, cfg.delta_list, cfg.quad);
            for (const auto& pt : curve)
                doc.curves.add_row({"no_flow_through", fmt_double(pt.delta),
                                    fmt_double(pt.value.lower), fmt_double(pt.value.upper)});
            // Verdict on the node maxima; the Lipschitz-inflated upper bound
            // carries the fixed node-spacing term and is reported, not judged.
            const bool vanishing =
                curve.back().value.lower <=
                cfg.no_flow_decay_factor * std::max(curve.front().value.lower, 1e-300);
            bool nf_pass = true;
            if (cfg.expect_no_flow == "vanishing") nf_pass = vanishing;
            if (cfg.expect_no_flow == "persistent") nf_pass = !vanishing;
            doc.rate_fits.add_row({"no_flow_through", "0", "0", "0",
                                   fmt_double(static_cast<double>(curve.size())),
                                   fmt_double(curve.back().value.upper), "0", "0",
                                   nf_pass ? "pass" : "fail"});
            if (!nf_pass) doc.all_pass = false;
        }
    } else if (cfg.sweep_type == "filter_convergence") {
        if (cfg.h_list.empty()) throw ConfigError("filter_convergence sweep needs sweep.h_list");
        auto field = build_field(cfg, body);
        const double hi = cfg.annulus_hi > 0.0 ? cfg.annulus_hi : 0.6 * eps;
        const auto curve = filter_convergence_curve_component(
            *field, *body, cfg.curve_component, cfg.annulus_lo, hi, cfg.h_list, cfg.ell_ratio,
            2, cfg.quad);
        for (const auto& pt : curve)
            doc.curves.add_row({"filter_convergence", fmt_double(pt.h), fmt_double(pt.norm),
                                fmt_double(pt.norm)});
        bool monotone = curve.size() >= 3;
        for (std::size_t i = curve.size() >= 3 ? curve.size() - 3 : 0; i + 1 < curve.size(); ++i)
            monotone = monotone && curve[i + 1].norm < curve[i].norm;
        doc.rate_fits.add_row({"filter_convergence", "0", "0", "0",
                               fmt_double(static_cast<double>(curve.size())),
                               fmt_double(curve.back().norm), "0", "0",
                               monotone ? "pass" : "fail"});
        if (!monotone) doc.all_pass = false;
    } else {
        throw ConfigError("sweep.type must be scale, viscosity or filter_convergence");
    }

    doc.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return doc;
}

ReportDocument cmd_pair(const RunConfig& cfg, const std::string& pairing_id) {
    const auto start = std::chrono::steady_clock::now();
    kernels::set_backend(cfg.kernel_backend);

    ReportDocument doc;
    doc.command = "pair";
    doc.config_echo = cfg.raw;

    const RunConfig::PairSpec* spec = nullptr;
    for (const auto& p : cfg.pairing_specs)
        if (p.id == pairing_id) spec = &p;
    if (!spec) throw ConfigError("unknown pairing id: " + pairing_id);

    auto body = build_body(cfg);
    auto field = build_field(cfg, body);
    auto sections = build_sections(cfg, body);
    const double eps = extension_epsilon(cfg, *body);
    std::shared_ptr<const SurfaceSection> psi;
    for (const auto& s : sections)
        if (s->id == spec->section) psi = s;
    if (!psi) throw ConfigError("unknown section id: " + spec->section);

    PairingValue pv;
    if (spec->op == "wall_shear") {
        pv = pair_wall_shear(*field, *body, *psi, cfg.quad);
    } else if (spec->op == "wall_pressure") {
        pv = pair_wall_pressure(*field, *body, *psi, cfg.quad);
    } else if (spec->op == "flux") {
        const ExtendedTestField phi = psi->kind == SurfaceSection::Kind::Tangential
                                          ? extend_tangential(body, psi, eps)
                                          : extend_normal(body, psi, eps);
        pv = momentum_flux_pairing(*field, *body, spec->h, spec->ell, phi, cfg.quad);
    } else if (spec->op == "interior") {
        const ExtendedTestField phi = psi->kind == SurfaceSection::Kind::Tangential
                                          ? extend_tangential(body, psi, eps)
                                          : extend_normal(body, psi, eps);
        pv = weak_interior_functional(*field, *body, phi, cfg.quad);
    } else {
        throw ConfigError("unknown pairing op: " + spec->op);
    }
    pv.id = pairing_id;
    doc.pairings.push_back(pv);

    doc.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return doc;
}

}  // namespace wallflux
