#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "wallflux/budgets.hpp"
#include "wallflux/fields.hpp"
#include "wallflux/geometry.hpp"
#include "wallflux/sections.hpp"

namespace wallflux {

/// Parsed run configuration. The JSON document is validated strictly: unknown
/// keys are rejected and all ranges are checked before any computation.
struct RunConfig {
    nlohmann::json raw;

    // body
    std::string body_kind = "sphere";
    double radius = 1.0;
    Vec3 semi_axes{1.0, 1.0, 1.0};
    double tube_override = 0.0;

    // field
    std::string field_kind = "potential_sphere";
    Vec3 free_stream{0.0, 0.0, 1.0};
    double nu = 0.1;
    double p_inf = 0.0;
    double horizon = 1.0;
    double p_const = 0.0;
    std::string snapshot_path;
    double time_mod_amplitude = 0.0;
    BoundaryLayerOptions bl;

    // quadrature + extension
    QuadratureSpec quad;
    double extension_epsilon = 0.0;  // 0: default 0.9 * tubular radius
    double drift_coeff = 0.0;
    Vec3 drift_dir{0.0, 0.0, 1.0};

    struct SectionSpec {
        std::string id;
        std::string kind;    // tangential | normal
        std::string recipe;  // constant | rotation | axial_swirl | component
        Vec3 vec{0.0, 0.0, 1.0};
        double value = 1.0;  // constant normal scalar
    };
    std::vector<SectionSpec> sections;

    // verify
    std::vector<std::string> identities;
    double verify_h = 0.0;    // 0: default 0.2 * epsilon
    double verify_ell = 0.0;  // 0: default h/2
    double divergence_tol = 1e-8;

    // sweep
    std::string sweep_type;  // scale | viscosity | filter_convergence | (empty)
    std::vector<double> h_list;
    std::vector<double> nu_list;
    std::vector<double> delta_list;
    double ell_ratio = 0.5;
    std::string sweep_section;
    std::string sweep_target = "auto";
    int curve_component = 0;
    double annulus_lo = 0.0;
    double annulus_hi = 0.0;  // 0: default 0.6 * epsilon
    double expect_exponent = 0.0;
    double expect_exponent_tol = 0.0;  // 0: no exponent expectation
    double expect_exponent_min = 0.0;  // 0: no minimum expectation
    double expect_limit_gap_rel = 0.0; // 0: no limit-gap expectation
    double expect_drift_exponent_tol = 0.0;  // 0: no drift pressure-row expectation
    double no_flow_decay_factor = 0.5;
    std::string expect_no_flow;  // "vanishing" | "persistent" | ""

    struct PairSpec {
        std::string id;
        std::string op;  // wall_shear | wall_pressure | flux | interior
        std::string section;
        double h = 0.0, ell = 0.0;
    };
    std::vector<PairSpec> pairing_specs;

    std::string out_dir = "out";
    int threads = 1;
    unsigned seed = 0;
    std::string kernel_backend = "auto";
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json config_schema();

std::shared_ptr<Body> build_body(const RunConfig& cfg);
std::shared_ptr<FlowField> build_field(const RunConfig& cfg, std::shared_ptr<const Body> body);
std::shared_ptr<FlowField> build_field_at_nu(const RunConfig& cfg,
                                             std::shared_ptr<const Body> body, double nu);
std::vector<std::shared_ptr<const SurfaceSection>> build_sections(const RunConfig& cfg,
                                                                  std::shared_ptr<const Body> b);
double extension_epsilon(const RunConfig& cfg, const Body& body);

}  // namespace wallflux
