#pragma once

#include <memory>
#include <string>

#include "wallflux/fields.hpp"
#include "wallflux/filtering.hpp"
#include "wallflux/geometry.hpp"
#include "wallflux/sections.hpp"

namespace wallflux {

/// Orders for every quadrature a pairing touches. refined() is the one-step
/// refinement used for error estimates.
struct QuadratureSpec {
    int surface_order = 20;
    int radial_order = 24;        // tube panels (extension support)
    int shell_radial_order = 24;  // window transition band
    int time_order = 32;
    int ball_radial_order = 8;
    int ball_sphere_order = 8;

    QuadratureSpec refined() const;
    QuadratureSpec scaled(double f) const;
};

/// Scalar pairing with quadrature metadata. quad_error is the difference
/// against one refinement step; advective/pressure carry the flux split where
/// meaningful.
struct PairingValue {
    std::string id;
    std::string op;
    std::string field_id;
    std::string section_id;
    std::string extension = "none";
    double nu = 0.0;
    double h = 0.0;
    double ell = 0.0;
    double value = 0.0;
    double advective = 0.0;
    double pressure = 0.0;
    double quad_error = 0.0;
    std::size_t nodes = 0;
};

/// Left/right evaluation of a weak identity with refinement-based verdict:
/// the residual must not exceed 10x the larger refinement-step error estimate
/// (plus a roundoff floor), never a fixed absolute number alone.
struct IdentityResidual {
    std::string id;
    std::string op;
    std::string field_id;
    std::string section_id;
    double left = 0.0;
    double right = 0.0;
    double abs_residual = 0.0;
    double abs_residual_base = 0.0;  // at the unrefined orders
    double rel_residual = 0.0;
    double left_err = 0.0;
    double right_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

IdentityResidual make_identity_residual(std::string id, std::string op, std::string field_id,
                                        std::string section_id, double left_base,
                                        double right_base, double left_ref, double right_ref);

/// <tau_w, psi>: surface x time quadrature of the wall shear against a
/// tangential section. Zero for inviscid fields.
PairingValue pair_wall_shear(const FlowField& field, const Body& body,
                             const SurfaceSection& psi, const QuadratureSpec& spec);

/// <p_w n, psi>: surface x time quadrature of the wall pressure against the
/// normal scalar of psi.
PairingValue pair_wall_pressure(const FlowField& field, const Body& body,
                                const SurfaceSection& psi, const QuadratureSpec& spec);

/// The four-term interior functional minus the forcing pairing:
/// -<<u, dphi/dt>> - <u x u : grad phi> - <<p, div phi>> - <<nu u, lap phi>>
/// - <<g, phi>>, over the support of the extended test field.
PairingValue weak_interior_functional(const FlowField& field, const Body& body,
                                      const ExtendedTestField& phi, const QuadratureSpec& spec);

/// Interior functional against Ext_T(psi) versus -<tau_w, psi>.
IdentityResidual identity_residual_tangential(const FlowField& field, const Body& body,
                                              const ExtendedTestField& phi,
                                              const QuadratureSpec& spec);

/// Interior functional against Ext_N(psi) versus +<p_w n, psi>.
IdentityResidual identity_residual_normal(const FlowField& field, const Body& body,
                                          const ExtendedTestField& phi,
                                          const QuadratureSpec& spec);

/// Pairing of the wall-directed momentum flux -(grad eta . T_l + p_l grad eta)
/// with the extended section, over the transition shell. The advective and
/// pressure components are reported separately; their sum converges to
/// <tau_w, psi> (tangential) or -<p_w n, psi> (normal) as h, l -> 0.
PairingValue momentum_flux_pairing(const FlowField& field, const Body& body, double h, double l,
                                   const ExtendedTestField& phi, const QuadratureSpec& spec);

/// Windowed coarse-grained budget: interior terms (plus windowed forcing and
/// viscous term) against the flux pairing.
IdentityResidual coarse_grained_budget_residual(const FlowField& field, const Body& body,
                                                double h, double l,
                                                const ExtendedTestField& phi,
                                                const QuadratureSpec& spec);

/// Vorticity-source balance across the transition shell: step1 pairs the curl
/// of the test field with the filtered pressure; step2 is the equivalent form
/// through the coarse-grained momentum balance (with forced/viscous companion
/// terms for fields that need them).
struct LighthillBalance {
    PairingValue step1;
    PairingValue step2;
    IdentityResidual residual;
};
LighthillBalance lighthill_balance(const FlowField& field, const Body& body, double h, double l,
                                   const ExtendedTestField& phi, const QuadratureSpec& spec);

/// Compactly supported scalar test for the weak Neumann pressure identity:
/// value cutoff(d/support) * (1 + mod_amp * mod_dir . x).
struct ScalarBumpTest {
    std::shared_ptr<const Body> body;
    double support = 0.3;
    Vec3 mod_dir{0, 0, 0};
    double mod_amp = 0.0;

    double value(const Vec3& x) const;
    Vec3 grad(const Vec3& x) const;
    Mat3 hessian(const Vec3& x) const;
    double laplacian(const Vec3& x) const;
};

/// Residual of int [p lap(phi) + u x u : hess(phi)] dV = surface integral of
/// p dphi/dnu (outward normal derivative), for inviscid impermeable fields.
IdentityResidual pressure_weak_neumann_residual(const FlowField& field, const Body& body,
                                                const ScalarBumpTest& test, double t,
                                                const QuadratureSpec& spec);

}  // namespace wallflux
