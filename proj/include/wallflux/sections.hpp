#pragma once

#include <memory>
#include <string>

#include "wallflux/geometry.hpp"
#include "wallflux/vec.hpp"

namespace wallflux {

/// Smooth time profile compactly supported in (t0, t1), peak value 1, all
/// derivatives vanishing at the endpoints.
struct TimeBump {
    double t0 = 0.0, t1 = 1.0;

    double value(double t) const;
    double deriv(double t) const;
    /// Exact integral over the support (from cached profile constants).
    double integral() const;

    /// Canonical bump supported on [0.2 T, 0.8 T].
    static TimeBump standard(double horizon) { return {0.2 * horizon, 0.8 * horizon}; }
};

/// Ambient polynomial vector fields used as section recipes.
/// constant: c;  rotation: w x x;  axial_swirl: (m.x)(m x x);
/// stretch: (v.x)v;  meridional: (m.x)(x - (m.x)m);  affine: A x + b.
struct AmbientField {
    enum class Kind {
        Constant,
        Rotation,
        AxialSwirl,
        Stretch,
        Meridional,
        Affine
    } kind = Kind::Constant;
    Vec3 vec;   // c, w, m, or v
    Mat3 mat;   // affine A
    Vec3 shift; // affine b

    Vec3 eval(const Vec3& x) const;

    static AmbientField constant(const Vec3& c) { return {Kind::Constant, c, {}, {}}; }
    static AmbientField rotation(const Vec3& w) { return {Kind::Rotation, w, {}, {}}; }
    static AmbientField axial_swirl(const Vec3& m) { return {Kind::AxialSwirl, m, {}, {}}; }
    static AmbientField stretch(const Vec3& v) { return {Kind::Stretch, v, {}, {}}; }
    static AmbientField meridional(const Vec3& m) { return {Kind::Meridional, m, {}, {}}; }
};

/// Scalar profiles for normal sections.
struct NormalProfile {
    enum class Kind { Constant, Component, ComponentSquared, Companion } kind = Kind::Constant;
    double c0 = 1.0;
    Vec3 vec;  // component direction
    std::shared_ptr<const struct SurfaceSection> companion_of;  // tangential source

    static NormalProfile constant(double c) { return {Kind::Constant, c, {}, nullptr}; }
    static NormalProfile component(const Vec3& m) { return {Kind::Component, 0.0, m, nullptr}; }
    static NormalProfile component_squared(const Vec3& m) {
        return {Kind::ComponentSquared, 0.0, m, nullptr};
    }
};

/// Smooth test section on the space-time wall: either a tangential vector
/// field (tangential projection of an ambient polynomial field) or a scalar
/// multiple of the normal, both times a compactly supported time bump.
struct SurfaceSection {
    enum class Kind { Tangential, Normal } kind = Kind::Tangential;
    std::string id = "section";
    std::shared_ptr<const Body> body;
    AmbientField ambient;    // tangential kind
    NormalProfile profile;   // normal kind
    TimeBump bump;

    /// Spatial factor at a surface point (ambient vector).
    Vec3 spatial(const Vec3& s) const;
    /// Scalar sigma(s) for normal sections.
    double normal_scalar(const Vec3& s) const;
    Vec3 value(const Vec3& s, double t) const { return bump.value(t) * spatial(s); }

    /// Sup of |psi| and its first two surface derivatives over the nodes of a
    /// surface rule (measured seminorm).
    double seminorm(const SurfaceQuadrature& sq, int order) const;

    static SurfaceSection tangential(std::string id, std::shared_ptr<const Body> body,
                                     const AmbientField& ambient, const TimeBump& bump);
    static SurfaceSection normal(std::string id, std::shared_ptr<const Body> body,
                                 const NormalProfile& profile, const TimeBump& bump);
};

/// Normal companion of a tangential section: sigma = (n x grad) . psi, the
/// surface-curl scalar, computed by tangential finite differences in a local
/// frame. This is the scalar pairing a wall-pressure distribution against the
/// vorticity-source structure of the tangential section.
SurfaceSection lighthill_companion_section(const std::shared_ptr<const SurfaceSection>& psi);

/// Extension of a surface section into the domain with radial weight
/// exp(-d/(eps-d)) and cutoff at d >= eps. The canonical tangential extension
/// keeps phi.n = 0 exactly throughout the tube; an optional drift adds
/// c*(d/eps)*(psi.m0) n, which is O(h) on a transition shell.
class ExtendedTestField {
public:
    ExtendedTestField(std::shared_ptr<const Body> body,
                      std::shared_ptr<const SurfaceSection> section, double epsilon,
                      double drift_coeff = 0.0, const Vec3& drift_dir = {0, 0, 1});

    double epsilon() const { return eps_; }
    const SurfaceSection& section() const { return *section_; }
    bool has_drift() const { return drift_c_ != 0.0; }

    Vec3 value(const Vec3& x, double t) const;

    /// Spatial factor w(d) q(x) without the derivative bundle.
    Vec3 value_spatial(const Vec3& x) const;

    /// Spatial factor and its derivatives; the full field is value = beta(t) *
    /// spatial.value and time derivative beta'(t) * spatial.value.
    struct SpatialBundle {
        Vec3 value{};
        Mat3 grad{};      // grad(i,j) = d phi_i / d x_j
        Vec3 laplacian{};
        Vec3 curl{};
        double divergence = 0.0;
    };
    SpatialBundle spatial(const Vec3& x) const;

    struct Derivs {
        Vec3 value, dt, laplacian, curl;
        Mat3 grad;
        double divergence;
    };
    Derivs derivatives(const Vec3& x, double t) const;

    /// Steps used by the finite differences on the smooth factors.
    double fd_step1() const { return eta1_; }
    double fd_step2() const { return eta2_; }

private:
    Vec3 smooth_factor(const Vec3& x) const;  // q(x): transported section (+ drift)

    std::shared_ptr<const Body> body_;
    std::shared_ptr<const SurfaceSection> section_;
    double eps_;
    double drift_c_;
    Vec3 drift_m_;
    double eta1_, eta2_;
};

ExtendedTestField extend_tangential(std::shared_ptr<const Body> body,
                                    std::shared_ptr<const SurfaceSection> psi, double epsilon);
ExtendedTestField extend_normal(std::shared_ptr<const Body> body,
                                std::shared_ptr<const SurfaceSection> psi, double epsilon);
/// Non-natural tangential extension exhibiting an O(h) normal component.
ExtendedTestField extend_tangential_drift(std::shared_ptr<const Body> body,
                                          std::shared_ptr<const SurfaceSection> psi,
                                          double epsilon, double drift_coeff,
                                          const Vec3& drift_dir);

}  // namespace wallflux
