#include "wallflux/config.hpp"

#include <fstream>
#include <set>

#include "wallflux/error.hpp"
#include "wallflux/snapshot.hpp"

namespace wallflux {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

Vec3 get_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double get_positive(const json& j, const std::string& where) {
    const double v = j.get<double>();
    if (!(v > 0.0)) throw ConfigError(where + " must be positive");
    return v;
}

std::vector<double> get_decreasing_list(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(get_positive(v, where + " entry"));
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] >= out[i - 1]) throw ConfigError(where + " must be strictly decreasing");
    return out;
}

}  // namespace

RunConfig parse_config(const json& doc) {
    RunConfig cfg;
    cfg.raw = doc;
    require_keys(doc, "config",
                 {"body", "field", "quadrature", "extension", "sections", "verify", "sweep",
                  "pairings", "output", "threads", "seed", "kernel_backend"});

    if (doc.contains("body")) {
        const json& b = doc["body"];
        require_keys(b, "body", {"kind", "radius", "semi_axes", "tubular_radius"});
        cfg.body_kind = b.value("kind", "sphere");
        if (cfg.body_kind != "sphere" && cfg.body_kind != "ellipsoid")
            throw ConfigError("body.kind must be sphere or ellipsoid");
        if (b.contains("radius")) cfg.radius = get_positive(b["radius"], "body.radius");
        if (b.contains("semi_axes")) cfg.semi_axes = get_vec3(b["semi_axes"], "body.semi_axes");
        if (b.contains("tubular_radius"))
            cfg.tube_override = get_positive(b["tubular_radius"], "body.tubular_radius");
    }

    if (doc.contains("field")) {
        const json& f = doc["field"];
        require_keys(f, "field",
                     {"catalog", "free_stream", "nu", "p_inf", "horizon", "p_const", "snapshot",
                      "time_modulation", "delta_exponent", "delta0", "normal_perturbation",
                      "divergence_correction"});
        cfg.field_kind = f.value("catalog", "potential_sphere");
        if (f.contains("free_stream")) cfg.free_stream = get_vec3(f["free_stream"], "free_stream");
        if (f.contains("nu")) cfg.nu = get_positive(f["nu"], "field.nu");
        if (f.contains("p_inf")) cfg.p_inf = f["p_inf"].get<double>();
        if (f.contains("p_const")) cfg.p_const = f["p_const"].get<double>();
        if (f.contains("horizon")) cfg.horizon = get_positive(f["horizon"], "field.horizon");
        if (f.contains("snapshot")) cfg.snapshot_path = f["snapshot"].get<std::string>();
        if (f.contains("time_modulation"))
            cfg.time_mod_amplitude = f["time_modulation"].get<double>();
        if (f.contains("delta_exponent"))
            cfg.bl.delta_exponent = get_positive(f["delta_exponent"], "delta_exponent");
        if (f.contains("delta0")) cfg.bl.delta0 = get_positive(f["delta0"], "delta0");
        if (f.contains("normal_perturbation"))
            cfg.bl.normal_perturbation = f["normal_perturbation"].get<double>();
        if (f.contains("divergence_correction"))
            cfg.bl.divergence_correction = f["divergence_correction"].get<bool>();
    }

    if (doc.contains("quadrature")) {
        const json& q = doc["quadrature"];
        require_keys(q, "quadrature",
                     {"surface_order", "radial_order", "shell_radial_order", "time_order",
                      "ball_radial_order", "ball_sphere_order"});
        auto geti = [&](const char* key, int dflt) {
            if (!q.contains(key)) return dflt;
            const int v = q[key].get<int>();
            if (v < 2) throw ConfigError(std::string("quadrature.") + key + " must be >= 2");
            return v;
        };
        cfg.quad.surface_order = geti("surface_order", cfg.quad.surface_order);
        cfg.quad.radial_order = geti("radial_order", cfg.quad.radial_order);
        cfg.quad.shell_radial_order = geti("shell_radial_order", cfg.quad.shell_radial_order);
        cfg.quad.time_order = geti("time_order", cfg.quad.time_order);
        cfg.quad.ball_radial_order = geti("ball_radial_order", cfg.quad.ball_radial_order);
        cfg.quad.ball_sphere_order = geti("ball_sphere_order", cfg.quad.ball_sphere_order);
    }

    if (doc.contains("extension")) {
        const json& e = doc["extension"];
        require_keys(e, "extension", {"epsilon", "drift", "drift_dir"});
        if (e.contains("epsilon"))
            cfg.extension_epsilon = get_positive(e["epsilon"], "extension.epsilon");
        if (e.contains("drift")) cfg.drift_coeff = e["drift"].get<double>();
        if (e.contains("drift_dir")) cfg.drift_dir = get_vec3(e["drift_dir"], "drift_dir");
    }

    if (doc.contains("sections")) {
        if (!doc["sections"].is_array()) throw ConfigError("sections must be an array");
        for (const json& s : doc["sections"]) {
            require_keys(s, "section", {"id", "kind", "recipe", "vector", "value"});
            RunConfig::SectionSpec spec;
            spec.id = s.at("id").get<std::string>();
            spec.kind = s.at("kind").get<std::string>();
            spec.recipe = s.at("recipe").get<std::string>();
            if (s.contains("vector")) spec.vec = get_vec3(s["vector"], "section.vector");
            if (s.contains("value")) spec.value = s["value"].get<double>();
            if (spec.kind != "tangential" && spec.kind != "normal")
                throw ConfigError("section.kind must be tangential or normal");
            cfg.sections.push_back(spec);
        }
    }

    if (doc.contains("verify")) {
        const json& v = doc["verify"];
        require_keys(v, "verify", {"identities", "h", "ell", "divergence_tol"});
        if (v.contains("identities"))
            for (const auto& s : v["identities"]) cfg.identities.push_back(s.get<std::string>());
        if (v.contains("h")) cfg.verify_h = get_positive(v["h"], "verify.h");
        if (v.contains("ell")) cfg.verify_ell = get_positive(v["ell"], "verify.ell");
        if (v.contains("divergence_tol"))
            cfg.divergence_tol = get_positive(v["divergence_tol"], "verify.divergence_tol");
        if (cfg.verify_h > 0.0 && cfg.verify_ell > 0.0 && cfg.verify_ell >= cfg.verify_h)
            throw ConfigError("verify.ell must be smaller than verify.h");
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        require_keys(s, "sweep",
                     {"type", "h_list", "nu_list", "delta_list", "ell_ratio", "section",
                      "target", "component", "annulus", "expect_exponent",
                      "expect_exponent_tol", "expect_exponent_min", "expect_limit_gap_rel",
                      "expect_drift_exponent_tol", "no_flow_decay_factor", "expect_no_flow"});
        cfg.sweep_type = s.value("type", "");
        if (s.contains("h_list")) cfg.h_list = get_decreasing_list(s["h_list"], "sweep.h_list");
        if (s.contains("nu_list"))
            cfg.nu_list = get_decreasing_list(s["nu_list"], "sweep.nu_list");
        if (s.contains("delta_list"))
            cfg.delta_list = get_decreasing_list(s["delta_list"], "sweep.delta_list");
        if (s.contains("ell_ratio")) {
            cfg.ell_ratio = s["ell_ratio"].get<double>();
            if (!(cfg.ell_ratio > 0.0 && cfg.ell_ratio < 1.0))
                throw ConfigError("sweep.ell_ratio must lie in (0,1)");
        }
        cfg.sweep_section = s.value("section", "");
        cfg.sweep_target = s.value("target", "auto");
        cfg.curve_component = s.value("component", 0);
        if (s.contains("annulus")) {
            const json& a = s["annulus"];
            if (!a.is_array() || a.size() != 2) throw ConfigError("sweep.annulus must be [lo,hi]");
            cfg.annulus_lo = a[0].get<double>();
            cfg.annulus_hi = a[1].get<double>();
            if (cfg.annulus_lo < 0.0 || cfg.annulus_hi <= cfg.annulus_lo)
                throw ConfigError("sweep.annulus must satisfy 0 <= lo < hi");
        }
        cfg.expect_exponent = s.value("expect_exponent", 0.0);
        cfg.expect_exponent_tol = s.value("expect_exponent_tol", 0.0);
        cfg.expect_exponent_min = s.value("expect_exponent_min", 0.0);
        cfg.expect_limit_gap_rel = s.value("expect_limit_gap_rel", 0.0);
        cfg.expect_drift_exponent_tol = s.value("expect_drift_exponent_tol", 0.0);
        cfg.no_flow_decay_factor = s.value("no_flow_decay_factor", 0.5);
        cfg.expect_no_flow = s.value("expect_no_flow", "");
    }

    if (doc.contains("pairings")) {
        if (!doc["pairings"].is_array()) throw ConfigError("pairings must be an array");
        for (const json& p : doc["pairings"]) {
            require_keys(p, "pairing", {"id", "op", "section", "h", "ell"});
            RunConfig::PairSpec spec;
            spec.id = p.at("id").get<std::string>();
            spec.op = p.at("op").get<std::string>();
            spec.section = p.value("section", "");
            spec.h = p.value("h", 0.0);
            spec.ell = p.value("ell", 0.0);
            cfg.pairing_specs.push_back(spec);
        }
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        require_keys(o, "output", {"dir"});
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
    }
    if (doc.contains("threads")) {
        cfg.threads = doc["threads"].get<int>();
        if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    }
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<unsigned>();
    if (doc.contains("kernel_backend"))
        cfg.kernel_backend = doc["kernel_backend"].get<std::string>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path);
    json doc;
    try {
        f >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

std::shared_ptr<Body> build_body(const RunConfig& cfg) {
    if (cfg.body_kind == "sphere") return Body::make_sphere(cfg.radius, cfg.tube_override);
    return Body::make_ellipsoid(cfg.semi_axes, cfg.tube_override);
}

std::shared_ptr<FlowField> build_field_at_nu(const RunConfig& cfg,
                                             std::shared_ptr<const Body> body, double nu) {
    std::shared_ptr<FlowField> f;
    if (cfg.field_kind == "potential_sphere") {
        f = make_potential_sphere(cfg.free_stream, cfg.radius, cfg.p_inf, cfg.horizon);
    } else if (cfg.field_kind == "stokes_sphere") {
        f = make_stokes_sphere(cfg.free_stream, cfg.radius, nu, cfg.p_inf, cfg.horizon);
    } else if (cfg.field_kind == "boundary_layer") {
        f = make_boundary_layer(body, cfg.free_stream, cfg.radius, nu, cfg.bl, cfg.horizon);
    } else if (cfg.field_kind == "free_stream") {
        f = make_free_stream(cfg.free_stream, cfg.p_const, cfg.horizon);
    } else if (cfg.field_kind == "zero") {
        f = make_zero_field(cfg.p_const, cfg.horizon);
    } else if (cfg.field_kind == "snapshot") {
        f = make_sampled_field(read_snapshot(cfg.snapshot_path), cfg.horizon);
    } else {
        throw ConfigError("unknown field catalog entry: " + cfg.field_kind);
    }
    if (cfg.time_mod_amplitude != 0.0) f = make_time_modulated(f, cfg.time_mod_amplitude);
    return f;
}

std::shared_ptr<FlowField> build_field(const RunConfig& cfg, std::shared_ptr<const Body> body) {
    return build_field_at_nu(cfg, std::move(body), cfg.nu);
}

std::vector<std::shared_ptr<const SurfaceSection>> build_sections(
    const RunConfig& cfg, std::shared_ptr<const Body> body) {
    std::vector<std::shared_ptr<const SurfaceSection>> out;
    const TimeBump bump = TimeBump::standard(cfg.horizon);
    for (const auto& spec : cfg.sections) {
        if (spec.kind == "tangential") {
            AmbientField amb;
            if (spec.recipe == "constant") {
                amb = AmbientField::constant(spec.vec);
            } else if (spec.recipe == "rotation") {
                amb = AmbientField::rotation(spec.vec);
            } else if (spec.recipe == "axial_swirl") {
                amb = AmbientField::axial_swirl(spec.vec);
            } else if (spec.recipe == "stretch") {
                amb = AmbientField::stretch(spec.vec);
            } else if (spec.recipe == "meridional") {
                amb = AmbientField::meridional(spec.vec);
            } else {
                throw ConfigError("unknown tangential recipe: " + spec.recipe);
            }
            out.push_back(std::make_shared<SurfaceSection>(
                SurfaceSection::tangential(spec.id, body, amb, bump)));
        } else {
            NormalProfile prof;
            if (spec.recipe == "constant") {
                prof = NormalProfile::constant(spec.value);
            } else if (spec.recipe == "component") {
                prof = NormalProfile::component(spec.vec);
            } else if (spec.recipe == "component_squared") {
                prof = NormalProfile::component_squared(spec.vec);
            } else {
                throw ConfigError("unknown normal recipe: " + spec.recipe);
            }
            out.push_back(std::make_shared<SurfaceSection>(
                SurfaceSection::normal(spec.id, body, prof, bump)));
        }
    }
    return out;
}

double extension_epsilon(const RunConfig& cfg, const Body& body) {
    return cfg.extension_epsilon > 0.0 ? cfg.extension_epsilon : 0.9 * body.tubular_radius();
}

nlohmann::json config_schema() {
    json s;
    s["body"] = {{"kind", "sphere | ellipsoid"},
                 {"radius", "sphere radius (length)"},
                 {"semi_axes", "[rx, ry, rz] for ellipsoid"},
                 {"tubular_radius", "optional override (length)"}};
    s["field"] = {
        {"catalog",
         "potential_sphere | stokes_sphere | boundary_layer | free_stream | zero | snapshot"},
        {"free_stream", "[Vx, Vy, Vz]"},
        {"nu", "viscosity (length^2/time), > 0 for viscous entries"},
        {"p_inf", "far-field pressure"},
        {"p_const", "constant pressure (zero / free_stream entries)"},
        {"horizon", "time horizon T"},
        {"snapshot", "path to a sampled snapshot file"},
        {"time_modulation", "amplitude of a smooth time modulation (0 = steady)"},
        {"delta_exponent", "boundary layer: delta = delta0 * nu^alpha"},
        {"delta0", "boundary layer thickness prefactor"},
        {"normal_perturbation", "boundary layer: mid-layer wall-normal velocity amplitude"},
        {"divergence_correction", "boundary layer: integrate the layer divergence (bool)"}};
    s["quadrature"] = {{"surface_order", "Gauss order on the surface (nodes: 2*order^2)"},
                       {"radial_order", "Gauss order per tube panel"},
                       {"shell_radial_order", "Gauss order across a transition band"},
                       {"time_order", "Gauss order over the time bump"},
                       {"ball_radial_order", "mollifier radial order"},
                       {"ball_sphere_order", "mollifier spherical order"}};
    s["extension"] = {{"epsilon", "extension support (default 0.9 * tubular radius)"},
                      {"drift", "non-natural extension drift coefficient (0 = canonical)"},
                      {"drift_dir", "drift coupling direction"}};
    s["sections"] = {{"id", "name"},
                     {"kind", "tangential | normal"},
                     {"recipe", "constant | rotation | axial_swirl | stretch | meridional | component | component_squared"},
                     {"vector", "recipe vector"},
                     {"value", "constant normal scalar"}};
    s["verify"] = {{"identities",
                    "list: tangential:<id> | normal:<id> | cg_budget:<id> | lighthill:<id> | "
                    "neumann | divergence | geometry"},
                   {"h", "window offset for budget identities"},
                   {"ell", "window width (must be < h)"},
                   {"divergence_tol", "threshold for the divergence check"}};
    s["sweep"] = {{"type", "scale | viscosity | filter_convergence"},
                  {"h_list", "decreasing offsets (scale sweeps)"},
                  {"nu_list", "decreasing viscosities (viscosity sweeps)"},
                  {"delta_list", "decreasing probe distances (no-flow-through curve)"},
                  {"ell_ratio", "ell = ratio * h, in (0,1)"},
                  {"section", "section id the sweep pairs against"},
                  {"target", "auto | wall_shear | wall_pressure | zero"},
                  {"component", "filter_convergence: velocity component 0..2 or 3 for pressure"},
                  {"annulus", "filter_convergence: [d_lo, d_hi] wall annulus"},
                  {"expect_exponent", "verdict: fitted exponent target"},
                  {"expect_exponent_tol", "verdict: +- tolerance on the exponent"},
                  {"expect_exponent_min", "verdict: minimum fitted exponent"},
                  {"expect_limit_gap_rel", "verdict: relative gap of the limit estimate"},
                  {"expect_drift_exponent_tol",
                   "verdict: +- tolerance on the drift pressure-component exponent around 1"},
                  {"no_flow_decay_factor", "no-flow verdict: final/initial upper bound"},
                  {"expect_no_flow", "vanishing | persistent"}};
    s["pairings"] = {{"id", "name"},
                     {"op", "wall_shear | wall_pressure | flux | interior"},
                     {"section", "section id"},
                     {"h", "flux pairing offset"},
                     {"ell", "flux pairing width"}};
    s["output"] = {{"dir", "output directory"}};
    s["threads"] = "worker threads (>= 1)";
    s["seed"] = "seed for geometry spot checks";
    s["kernel_backend"] = "auto | scalar | avx2";
    return s;
}

}  // namespace wallflux
