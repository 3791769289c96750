#include <doctest.h>

#include <cmath>

#include "wallflux/budgets.hpp"
#include "wallflux/error.hpp"

using namespace wallflux;

namespace {

std::shared_ptr<const Body> sphere() {
    static std::shared_ptr<const Body> b = Body::make_sphere(1.0);
    return b;
}

const Vec3 kV{0, 0, 1};
const TimeBump kBump = TimeBump::standard(1.0);
const double kEps = 0.45;

QuadratureSpec light() {
    QuadratureSpec s;
    s.surface_order = 12;
    s.radial_order = 16;
    s.shell_radial_order = 16;
    s.time_order = 20;
    s.ball_radial_order = 6;
    s.ball_sphere_order = 6;
    return s;
}

std::shared_ptr<const SurfaceSection> tan_section(const std::string& id, const AmbientField& a) {
    return std::make_shared<SurfaceSection>(SurfaceSection::tangential(id, sphere(), a, kBump));
}
std::shared_ptr<const SurfaceSection> nrm_section(const std::string& id,
                                                  const NormalProfile& p) {
    return std::make_shared<SurfaceSection>(SurfaceSection::normal(id, sphere(), p, kBump));
}

}  // namespace

TEST_CASE("wall pairings on the zero field vanish") {
    auto f = make_zero_field(0.0, 1.0);
    auto psi = tan_section("t", AmbientField::constant(kV));
    CHECK(pair_wall_shear(*f, *sphere(), *psi, light()).value == 0.0);
    auto npsi = nrm_section("n", NormalProfile::component(kV));
    CHECK(std::fabs(pair_wall_pressure(*f, *sphere(), *npsi, light()).value) < 1e-15);
}

TEST_CASE("skin friction pairing reproduces the drag integral") {
    const double nu = 0.1;
    auto f = make_stokes_sphere(kV, 1.0, nu, 0.0, 1.0);
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const PairingValue pv = pair_wall_shear(*f, *sphere(), *psi, light());
    const double expect = 4.0 * M_PI * nu * kBump.integral();
    CHECK(pv.value == doctest::Approx(expect).epsilon(1e-6));
    // brute-force dense-quadrature oracle
    QuadratureSpec dense = light().scaled(3.0);
    const PairingValue pd = pair_wall_shear(*f, *sphere(), *psi, dense);
    CHECK(pv.value == doctest::Approx(pd.value).epsilon(1e-9));
    // transverse section pairs to zero by symmetry
    auto px = tan_section("tx", AmbientField::constant({1, 0, 0}));
    CHECK(std::fabs(pair_wall_shear(*f, *sphere(), *px, light()).value) < 1e-12);
    // inviscid fields carry no shear pairing
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    CHECK(pair_wall_shear(*pot, *sphere(), *psi, light()).value == 0.0);
}

TEST_CASE("wall pressure pairings") {
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    // constant pressure against a closed surface: integral of n vanishes
    auto cp = make_zero_field(2.5, 1.0);
    CHECK(std::fabs(pair_wall_pressure(*cp, *sphere(), *nz, light()).value) < 1e-13);
    // d'Alembert: potential-flow form drag is zero
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    CHECK(std::fabs(pair_wall_pressure(*pot, *sphere(), *nz, light()).value) < 1e-10);
    // Stokes pressure-drag pairing
    const double nu = 0.1;
    auto stokes = make_stokes_sphere(kV, 1.0, nu, 0.0, 1.0);
    const PairingValue pv = pair_wall_pressure(*stokes, *sphere(), *nz, light());
    CHECK(pv.value == doctest::Approx(-2.0 * M_PI * nu * kBump.integral()).epsilon(1e-6));
}

TEST_CASE("weak interior functional vanishes on the trivial field") {
    auto f = make_zero_field(0.0, 1.0);
    auto psi = tan_section("t", AmbientField::constant(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
    CHECK(std::fabs(weak_interior_functional(*f, *sphere(), phi, light()).value) < 1e-14);
}

TEST_CASE("tangential momentum identity") {
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
    const IdentityResidual r = identity_residual_tangential(*stokes, *sphere(), phi, light());
    CHECK(r.pass);
    CHECK(r.rel_residual < 1e-6);
    CHECK(std::fabs(r.right + 4.0 * M_PI * 0.1 * kBump.integral()) < 1e-6);
    // a boundary-layer surrogate at one viscosity, forced closure
    BoundaryLayerOptions opt;
    opt.delta_exponent = 0.5;
    for (double nu : {0.04, 0.02, 0.01}) {  // dyadic slice of the family
        auto bl = make_boundary_layer(sphere(), kV, 1.0, nu, opt, 1.0);
        const IdentityResidual rb = identity_residual_tangential(*bl, *sphere(), phi, light());
        CHECK(rb.rel_residual < 1e-5);
    }
}

TEST_CASE("normal momentum identity") {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    auto n1 = nrm_section("n1", NormalProfile::constant(1.0));
    const ExtendedTestField phi = extend_normal(sphere(), n1, kEps);
    const IdentityResidual r = identity_residual_normal(*pot, *sphere(), phi, light());
    CHECK(r.pass);
    CHECK(r.rel_residual < 1e-6);
    // degenerate field: both sides equal p * integral of sigma
    auto cp = make_zero_field(3.0, 1.0);
    const IdentityResidual rc = identity_residual_normal(*cp, *sphere(), phi, light());
    CHECK(rc.pass);
    CHECK(std::fabs(rc.left - 3.0 * 4.0 * M_PI * kBump.integral()) < 1e-9);
    CHECK(std::fabs(rc.left - rc.right) < 1e-8);
    // forced Stokes
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    const ExtendedTestField phi2 = extend_normal(sphere(), nz, kEps);
    const IdentityResidual rs = identity_residual_normal(*stokes, *sphere(), phi2, light());
    CHECK(rs.pass);
    CHECK(rs.rel_residual < 1e-6);
}

TEST_CASE("identity holds for an unsteady field through the time quadrature") {
    BoundaryLayerOptions opt;
    opt.delta_exponent = 0.5;
    auto bl = make_boundary_layer(sphere(), kV, 1.0, 0.04, opt, 1.0);
    auto f = make_time_modulated(bl, 0.3);
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
    const IdentityResidual r = identity_residual_tangential(*f, *sphere(), phi, light());
    CHECK(r.rel_residual < 1e-5);
    CHECK(r.pass);
}

TEST_CASE("momentum flux pairing basics") {
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
    // free stream: pressure component exactly zero, total zero by symmetry
    auto fs = make_free_stream(kV, 0.0, 1.0);
    const PairingValue pv = momentum_flux_pairing(*fs, *sphere(), 0.1, 0.05, phi, light());
    CHECK(std::fabs(pv.pressure) < 1e-14);
    CHECK(std::fabs(pv.value) < 1e-12);
    // preconditions
    CHECK_THROWS_AS(momentum_flux_pairing(*fs, *sphere(), 0.05, 0.1, phi, light()),
                    DomainError);
    CHECK_THROWS_AS(momentum_flux_pairing(*fs, *sphere(), 0.3, 0.16, phi, light()),
                    DomainError);
}

TEST_CASE("flux pairing is linear in the section") {
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    auto nz3 = nrm_section("nz3", NormalProfile::component(3.5 * kV));
    const ExtendedTestField p1 = extend_normal(sphere(), nz, kEps);
    const ExtendedTestField p3 = extend_normal(sphere(), nz3, kEps);
    const double v1 = momentum_flux_pairing(*stokes, *sphere(), 0.1, 0.04, p1, light()).value;
    const double v3 = momentum_flux_pairing(*stokes, *sphere(), 0.1, 0.04, p3, light()).value;
    CHECK(v3 == doctest::Approx(3.5 * v1).epsilon(1e-12));
}

TEST_CASE("canonical extension annihilates the tangential pressure flux") {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
    const PairingValue pv = momentum_flux_pairing(*pot, *sphere(), 0.1, 0.04, phi, light());
    CHECK(std::fabs(pv.pressure) < 1e-14);
    // the drift extension produces a nonzero pressure component
    const ExtendedTestField drift =
        extend_tangential_drift(sphere(), psi, kEps, 0.5, {0, 0, 1});
    const PairingValue pd = momentum_flux_pairing(*pot, *sphere(), 0.1, 0.04, drift, light());
    CHECK(std::fabs(pd.pressure) > 1e-5);
}

TEST_CASE("identity verdicts agree across the two tangential extensions") {
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto psi = tan_section("tz", AmbientField::constant(kV));
    const ExtendedTestField canonical = extend_tangential(sphere(), psi, kEps);
    const ExtendedTestField drift =
        extend_tangential_drift(sphere(), psi, kEps, 0.5, {0, 0, 1});
    const IdentityResidual r1 = identity_residual_tangential(*stokes, *sphere(), canonical,
                                                             light());
    const IdentityResidual r2 = identity_residual_tangential(*stokes, *sphere(), drift, light());
    CHECK(r1.pass);
    CHECK(r2.pass);
    CHECK(std::fabs(r1.right - r2.right) < 1e-12);  // the wall side is extension-free
}

TEST_CASE("coarse-grained budget residual") {
    // section chosen so both sides of the budget are nonzero
    auto sx = tan_section("sx", AmbientField::stretch({1, 0, 0}));
    const ExtendedTestField phi = extend_tangential(sphere(), sx, kEps);
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    const IdentityResidual r =
        coarse_grained_budget_residual(*pot, *sphere(), 0.1, 0.05, phi, light());
    CHECK(std::fabs(r.left) > 1e-3);
    CHECK(r.rel_residual < 1e-6);
    CHECK(r.pass);
    // free stream: constants cancel exactly
    auto fs = make_free_stream(kV, 0.0, 1.0);
    const IdentityResidual rf =
        coarse_grained_budget_residual(*fs, *sphere(), 0.1, 0.05, phi, light());
    CHECK(std::fabs(rf.left - rf.right) < 1e-7);
    // zero field: exact zeros
    auto zf = make_zero_field(0.0, 1.0);
    const IdentityResidual rz =
        coarse_grained_budget_residual(*zf, *sphere(), 0.1, 0.05, phi, light());
    CHECK(rz.abs_residual < 1e-14);
    // forced viscous field
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    const IdentityResidual rs =
        coarse_grained_budget_residual(*stokes, *sphere(), 0.1, 0.05, phi, light());
    CHECK(rs.rel_residual < 1e-5);
    CHECK(rs.pass);
}

TEST_CASE("vorticity-source balance") {
    auto swirl = tan_section("swirl", AmbientField::axial_swirl(kV));
    const ExtendedTestField phi = extend_tangential(sphere(), swirl, kEps);
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    const LighthillBalance bal = lighthill_balance(*pot, *sphere(), 0.1, 0.05, phi, light());
    CHECK(std::fabs(bal.step1.value) > 0.1);
    CHECK(bal.residual.rel_residual < 1e-5);
    CHECK(bal.residual.pass);
    // constant wall pressure: the surface source pairing vanishes
    auto cp = make_zero_field(4.0, 1.0);
    auto comp = std::make_shared<SurfaceSection>(lighthill_companion_section(swirl));
    CHECK(std::fabs(pair_wall_pressure(*cp, *sphere(), *comp, light()).value) < 1e-9);
    // forced viscous field balances through the companion terms; the
    // rotation section pairs the dipole pressure with a nonzero source
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto rot = tan_section("rot", AmbientField::rotation(kV));
    const ExtendedTestField phi_r = extend_tangential(sphere(), rot, kEps);
    const LighthillBalance bs =
        lighthill_balance(*stokes, *sphere(), 0.1, 0.05, phi_r, light());
    CHECK(std::fabs(bs.step1.value) > 1e-4);
    CHECK(bs.residual.rel_residual < 1e-5);
    CHECK(bs.residual.pass);
}

TEST_CASE("weak Neumann pressure identity") {
    ScalarBumpTest test;
    test.body = sphere();
    test.support = 0.35;
    test.mod_dir = {1, 0, 0};  // aligned with the corrupted pressure direction
    test.mod_amp = 0.3;
    // constant pressure, zero velocity: reduces to the divergence theorem
    auto cp = make_zero_field(1.7, 1.0);
    const IdentityResidual rc =
        pressure_weak_neumann_residual(*cp, *sphere(), test, 0.5, light().scaled(1.4));
    CHECK(rc.abs_residual < 1e-8);
    CHECK(rc.pass);
    // potential flow with the Bernoulli pressure
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    const IdentityResidual rp =
        pressure_weak_neumann_residual(*pot, *sphere(), test, 0.5, light());
    CHECK(rp.rel_residual < 1e-6);
    CHECK(rp.pass);
    // negative control: a linear pressure offset breaks the wall condition
    class Corrupted final : public FlowField {
    public:
        explicit Corrupted(std::shared_ptr<const FlowField> base) : base_(std::move(base)) {
            nu_ = 0.0;
            horizon_ = base_->horizon();
        }
        std::string id() const override { return "corrupted"; }
        bool impermeable_wall() const override { return true; }
        Vec3 velocity(const Vec3& x, double t) const override { return base_->velocity(x, t); }
        double pressure(const Vec3& x, double t) const override {
            return base_->pressure(x, t) + x.x;
        }
        Mat3 velocity_grad(const Vec3& x, double t) const override {
            return base_->velocity_grad(x, t);
        }
        Vec3 velocity_laplacian(const Vec3& x, double t) const override {
            return base_->velocity_laplacian(x, t);
        }
        Vec3 pressure_grad(const Vec3& x, double t) const override {
            return base_->pressure_grad(x, t) + Vec3{1, 0, 0};
        }

    private:
        std::shared_ptr<const FlowField> base_;
    };
    Corrupted bad(pot);
    const IdentityResidual rb = pressure_weak_neumann_residual(bad, *sphere(), test, 0.5,
                                                               light());
    CHECK(!rb.pass);
    CHECK(rb.abs_residual > 1e-3);
    // viscous fields are rejected
    auto stokes = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    CHECK_THROWS_AS(pressure_weak_neumann_residual(*stokes, *sphere(), test, 0.5, light()),
                    DomainError);
}

TEST_CASE("budget pipeline on an ellipsoid body") {
    auto ell = Body::make_ellipsoid({2, 1, 1});
    auto cp = make_zero_field(2.0, 1.0);
    auto n1 = std::make_shared<SurfaceSection>(
        SurfaceSection::normal("n1", ell, NormalProfile::constant(1.0), kBump));
    const ExtendedTestField phi = extend_normal(ell, n1, 0.3);
    QuadratureSpec spec = light();
    const IdentityResidual r = identity_residual_normal(*cp, *ell, phi, spec);
    // both sides equal p times the surface area times the bump integral
    const double a = 2.0, b = 1.0;
    const double e = std::sqrt(1.0 - b * b / (a * a));
    const double area = 2.0 * M_PI * b * b * (1.0 + (a / (b * e)) * std::asin(e));
    CHECK(r.pass);
    CHECK(r.right == doctest::Approx(2.0 * area * kBump.integral()).epsilon(1e-8));
    // free-stream windowed budget closes on the curved Jacobians too
    auto fs = make_free_stream(kV, 0.0, 1.0);
    auto sx = std::make_shared<SurfaceSection>(
        SurfaceSection::tangential("sx", ell, AmbientField::stretch({1, 0, 0}), kBump));
    const ExtendedTestField phit = extend_tangential(ell, sx, 0.3);
    const IdentityResidual rf = coarse_grained_budget_residual(*fs, *ell, 0.08, 0.04, phit,
                                                               spec);
    CHECK(std::fabs(rf.left - rf.right) < 1e-6 * std::max(std::fabs(rf.left), 1.0));
}

TEST_CASE("pairing values are scaled by the field slot linearly") {
    // doubling the free stream doubles tau_w for the Stokes entry
    auto psi = tan_section("tz", AmbientField::constant(kV));
    auto f1 = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto f2 = make_stokes_sphere(2.0 * kV, 1.0, 0.1, 0.0, 1.0);
    const double v1 = pair_wall_shear(*f1, *sphere(), *psi, light()).value;
    const double v2 = pair_wall_shear(*f2, *sphere(), *psi, light()).value;
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-12));
}
