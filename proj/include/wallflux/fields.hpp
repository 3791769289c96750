#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wallflux/geometry.hpp"
#include "wallflux/vec.hpp"

namespace wallflux {

/// Which unforced residual vanishes identically for a catalog entry. Drives
/// oracle selection in tests and fast paths for the forcing term.
enum class ResidualClass { EulerExact, StokesExact, Forced };

/// Velocity gradient with derived strain rate and vorticity.
/// grad(i,j) = du_i/dx_j.
struct VelocityGradient {
    Mat3 grad;

    Mat3 strain() const {
        Mat3 s;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s.m[i][j] = 0.5 * (grad.m[i][j] + grad.m[j][i]);
        return s;
    }
    Vec3 vorticity() const {
        return {grad.m[2][1] - grad.m[1][2], grad.m[0][2] - grad.m[2][0],
                grad.m[1][0] - grad.m[0][1]};
    }
    double divergence() const { return trace(grad); }
};

/// A (u, p, nu, g) family over the exterior domain and a time horizon.
/// Values are immutable after construction and evaluations are pure, so
/// concurrent use needs no synchronization. The forcing g is the residual of
/// the conservative momentum equation and makes every entry an exact forced
/// solution.
class FlowField {
public:
    virtual ~FlowField() = default;

    virtual std::string id() const = 0;

    double viscosity() const { return nu_; }
    double horizon() const { return horizon_; }
    virtual bool steady() const { return true; }
    virtual ResidualClass residual_class() const { return ResidualClass::Forced; }

    /// True if the entry satisfies u = 0 on the wall (stick condition).
    virtual bool no_slip_wall() const { return false; }
    /// True if the entry satisfies u.n = 0 on the wall.
    virtual bool impermeable_wall() const { return false; }

    virtual Vec3 velocity(const Vec3& x, double t) const = 0;
    virtual double pressure(const Vec3& x, double t) const = 0;
    virtual Mat3 velocity_grad(const Vec3& x, double t) const = 0;
    virtual Vec3 velocity_laplacian(const Vec3& x, double t) const = 0;
    virtual Vec3 pressure_grad(const Vec3& x, double t) const = 0;
    virtual Vec3 velocity_dt(const Vec3&, double) const { return {}; }

    /// Forcing that closes the momentum balance:
    /// g = du/dt + div(u x u + p I) - nu lap(u), in conservative form.
    virtual Vec3 forcing(const Vec3& x, double t) const;

    /// Wall distances where the field changes character (layer edges);
    /// quadrature panels split there.
    virtual std::vector<double> radial_breakpoints() const { return {}; }

    double divergence(const Vec3& x, double t) const { return trace(velocity_grad(x, t)); }

    /// Wall trace of the pressure; analytic entries evaluate directly,
    /// sampled entries extrapolate from the interior.
    virtual double wall_pressure(const Body& body, const Vec3& s, double t) const;

protected:
    double nu_ = 0.0;
    double horizon_ = 1.0;
};

/// eval_state: field values with the time-horizon precondition enforced.
struct StatePoint {
    Vec3 velocity;
    double pressure;
};
StatePoint eval_state(const FlowField& field, const Vec3& x, double t);

VelocityGradient grad_velocity(const FlowField& field, const Vec3& x, double t);

/// Wall shear stress nu * (omega x n), tangential by construction. Throws for
/// viscous fields that violate the stick condition at s. Returns zero for
/// inviscid fields.
Vec3 wall_shear_stress(const FlowField& field, const Body& body, const Vec3& s, double t);

/// The three equivalent wall-stress expressions (2 nu S.n, nu du/dn,
/// nu omega x n); agreement is an invariant for solenoidal stick entries.
struct WallShearFormulas {
    Vec3 from_strain;
    Vec3 from_normal_deriv;
    Vec3 from_vorticity;
    double max_disagreement() const;
};
WallShearFormulas wall_shear_formulas(const FlowField& field, const Body& body, const Vec3& s,
                                      double t);

struct DivergenceReport {
    double max_abs = 0.0;
    double l2 = 0.0;
    std::size_t samples = 0;
};
/// Max and L2 divergence over the nodes of a wall band quadrature.
DivergenceReport check_divergence_free(const FlowField& field, const Body& body, double band_lo,
                                       double band_hi, int surf_order, int radial_order, double t);

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct BoundaryLayerOptions {
    double delta_exponent = 0.5;  ///< delta = delta0 * nu^alpha
    double delta0 = 1.0;
    double normal_perturbation = 0.0;  ///< amplitude of a mid-layer wall-normal velocity
    bool divergence_correction = false;
};

std::shared_ptr<FlowField> make_zero_field(double p_const, double horizon);
std::shared_ptr<FlowField> make_free_stream(const Vec3& v, double p_const, double horizon);
std::shared_ptr<FlowField> make_potential_sphere(const Vec3& free_stream, double radius,
                                                 double p_inf, double horizon);
std::shared_ptr<FlowField> make_stokes_sphere(const Vec3& free_stream, double radius, double nu,
                                              double p_inf, double horizon);
std::shared_ptr<FlowField> make_boundary_layer(std::shared_ptr<const Body> body,
                                               const Vec3& free_stream, double radius, double nu,
                                               const BoundaryLayerOptions& opt, double horizon);
std::shared_ptr<FlowField> make_polynomial_field(double scale, double pressure_scale, double nu,
                                                 double horizon);
/// Wraps a base field with a smooth time modulation gamma(t); forcing follows
/// by the chain rule.
std::shared_ptr<FlowField> make_time_modulated(std::shared_ptr<const FlowField> base,
                                               double amplitude);

}  // namespace wallflux
