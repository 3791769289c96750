#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "wallflux/error.hpp"
#include "wallflux/fd.hpp"
#include "wallflux/fields.hpp"
#include "wallflux/snapshot.hpp"
#include "wallflux/sweeps.hpp"

using namespace wallflux;

namespace {

const Vec3 kV{0, 0, 1};

Mat3 fd_velocity_grad(const FlowField& f, const Vec3& x, double t, double h = 1e-5) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        for (int i = 0; i < 3; ++i)
            g.m[i][j] =
                fd::deriv1([&](double s) { return f.velocity(x + s * e, t)[i]; }, h);
    }
    return g;
}

}  // namespace

TEST_CASE("potential sphere basics") {
    auto f = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    // far field approaches the free stream
    CHECK(norm(f->velocity({0, 0, 120.0}, 0.5) - kV) < 1e-5);
    // impermeable wall (derived from the dipole potential)
    const Vec3 s{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    CHECK(std::fabs(dot(f->velocity(s, 0.5), s)) < 1e-12);
    // Bernoulli wall pressure: p_w - p_inf = |V|^2/2 (1 - 9/4 sin^2 theta)
    const double sin2 = s.x * s.x + s.y * s.y;
    CHECK(f->pressure(s, 0.5) ==
          doctest::Approx(0.5 * (1.0 - 2.25 * sin2)).epsilon(1e-12));
    // exact steady Euler solution: forcing vanishes
    CHECK(norm(f->forcing({1.3, 0.2, 0.4}, 0.5)) < 1e-8);
    // closed-form gradient against finite differences
    const Vec3 x{1.2, -0.4, 0.5};
    const Mat3 g = f->velocity_grad(x, 0.5);
    const Mat3 gfd = fd_velocity_grad(*f, x, 0.5);
    CHECK(max_abs(g - gfd) < 1e-9);
    CHECK(std::fabs(trace(g)) < 1e-12);
}

TEST_CASE("rigid free stream has zero gradient") {
    auto f = make_free_stream({1.0, 2.0, 3.0}, 0.7, 1.0);
    CHECK(max_abs(f->velocity_grad({0.3, 4.0, -2.0}, 0.2)) == 0.0);
    CHECK(f->pressure({1, 1, 1}, 0.2) == 0.7);
}

TEST_CASE("stokes sphere basics") {
    const double nu = 0.1;
    auto body = Body::make_sphere(1.0);
    auto f = make_stokes_sphere(kV, 1.0, nu, 0.0, 1.0);
    const Vec3 s{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    // stick boundary condition
    CHECK(norm(f->velocity(s, 0.5)) < 1e-13);
    // wall vorticity magnitude 3U/(2a) sin(theta)
    const double sinth = std::sqrt(s.x * s.x + s.y * s.y);
    const VelocityGradient vg = grad_velocity(*f, s, 0.5);
    CHECK(norm(vg.vorticity()) == doctest::Approx(1.5 * sinth).epsilon(1e-10));
    // wall shear stress magnitude and tangency
    const Vec3 tau = wall_shear_stress(*f, *body, s, 0.5);
    CHECK(norm(tau) == doctest::Approx(1.5 * nu * sinth).epsilon(1e-10));
    CHECK(std::fabs(dot(tau, s)) < 1e-8 * norm(tau));
    // wall pressure -(3 nu U / 2a) cos(theta)
    CHECK(f->pressure(s, 0.5) == doctest::Approx(-1.5 * nu * s.z).epsilon(1e-12));
    // three wall-stress formulas agree for the solenoidal stick entry
    const WallShearFormulas wf = wall_shear_formulas(*f, *body, s, 0.5);
    CHECK(wf.max_disagreement() < 1e-8 * norm(tau));
    // forcing equals the neglected inertia, cross-checked by finite differences
    const Vec3 x{1.4, 0.2, 0.6};
    const Mat3 gfd = fd_velocity_grad(*f, x, 0.5);
    Vec3 pg;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        pg[j] = fd::deriv1([&](double t) { return f->pressure(x + t * e, 0.5); }, 1e-5);
    }
    Vec3 lap{};
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        for (int i = 0; i < 3; ++i)
            lap[i] += fd::deriv2([&](double t) { return f->velocity(x + t * e, 0.5)[i]; }, 1e-4);
    }
    const Vec3 g_fd = gfd * f->velocity(x, 0.5) + pg - nu * lap;
    CHECK(norm(f->forcing(x, 0.5) - g_fd) < 1e-6);
    // vorticity reconstruction from finite differences
    const VelocityGradient vg_fd{gfd};
    CHECK(norm(vg_fd.vorticity() - grad_velocity(*f, x, 0.5).vorticity()) < 1e-9);
}

TEST_CASE("wall shear stress preconditions") {
    auto body = Body::make_sphere(1.0);
    // inviscid field: zero stress
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    CHECK(norm(wall_shear_stress(*pot, *body, {0, 0, 1}, 0.5)) == 0.0);
    // viscous field violating the stick condition
    auto poly = make_polynomial_field(1.0, 0.5, 0.2, 1.0);
    CHECK_THROWS_WITH_AS(wall_shear_stress(*poly, *body, {0, 0, 1}, 0.5),
                         "no-slip violated; wall shear formulas inequivalent", DomainError);
}

TEST_CASE("divergence reports") {
    auto body = Body::make_sphere(1.0);
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    CHECK(check_divergence_free(*pot, *body, 0.0, 0.4, 12, 8, 0.5).max_abs < 1e-10);
    auto fs = make_free_stream(kV, 0.0, 1.0);
    CHECK(check_divergence_free(*fs, *body, 0.0, 0.4, 8, 6, 0.5).max_abs == 0.0);
}

TEST_CASE("eval_state enforces the horizon") {
    auto f = make_free_stream(kV, 0.0, 1.0);
    CHECK_THROWS_AS(eval_state(*f, {2, 0, 0}, 1.5), DomainError);
    CHECK(eval_state(*f, {2, 0, 0}, 0.5).pressure == 0.0);
}

TEST_CASE("boundary layer family") {
    auto body = Body::make_sphere(1.0);
    BoundaryLayerOptions opt;
    opt.delta_exponent = 0.5;
    const double nu = 0.01;  // delta = 0.1
    auto bl = make_boundary_layer(body, kV, 1.0, nu, opt, 1.0);
    const Vec3 s{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    // stick condition holds exactly
    CHECK(norm(bl->velocity(s, 0.5)) < 1e-12);
    // u.n equals the outer flow throughout the tube (zero normal perturbation)
    auto outer = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    for (double d : {0.02, 0.05, 0.2}) {
        const Vec3 x = (1.0 + d) * s;
        CHECK(std::fabs(dot(bl->velocity(x, 0.5), s) - dot(outer->velocity(x, 0.5), s)) < 1e-11);
    }
    // gradient against finite differences inside the layer
    const Vec3 x = 1.03 * s;
    CHECK(max_abs(bl->velocity_grad(x, 0.5) - fd_velocity_grad(*bl, x, 0.5, 2e-6)) < 1e-4);
    // wall shear scales like nu/delta: doubling of the slope under nu -> nu/4
    auto tau_mag = [&](double nuv) {
        auto f = make_boundary_layer(body, kV, 1.0, nuv, opt, 1.0);
        return norm(wall_shear_stress(*f, *body, s, 0.5));
    };
    const double r = tau_mag(0.01) / tau_mag(0.0025);
    CHECK(r == doctest::Approx(2.0).epsilon(0.1));  // nu/sqrt(nu) halves per nu/4
    // L2 convergence to the outer field on a compact annulus
    QuadratureSpec spec;
    spec.surface_order = 8;
    spec.shell_radial_order = 8;
    double prev = 1e30;
    for (double nuv : {0.04, 0.01, 0.0025}) {
        auto f = make_boundary_layer(body, kV, 1.0, nuv, opt, 1.0);
        const ShellQuadrature q = body->shell_quadrature(0.02, 0.3, 8, 8);
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += q.weights[i] * norm2(f->velocity(q.nodes[i], 0.5) -
                                        outer->velocity(q.nodes[i], 0.5));
        CHECK(acc < prev);
        prev = acc;
    }
}

TEST_CASE("layer-family wall stress stays tangential") {
    // The family is a forced surrogate and not solenoidal inside the layer,
    // so only the tangential parts of the three wall-stress formulas agree.
    auto body = Body::make_sphere(1.0);
    BoundaryLayerOptions opt;
    opt.delta_exponent = 0.5;
    auto bl = make_boundary_layer(body, kV, 1.0, 0.01, opt, 1.0);
    const Vec3 s{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    const Vec3 n = body->normal_at(s);
    const WallShearFormulas wf = wall_shear_formulas(*bl, *body, s, 0.5);
    const Vec3 tang_nd = wf.from_normal_deriv - dot(wf.from_normal_deriv, n) * n;
    CHECK(norm(tang_nd - wf.from_vorticity) < 1e-8 * norm(wf.from_vorticity));
    CHECK(std::fabs(dot(wf.from_vorticity, n)) < 1e-12 * norm(wf.from_vorticity));
}

TEST_CASE("boundary layer normal perturbation and divergence correction") {
    auto body = Body::make_sphere(1.0);
    BoundaryLayerOptions opt;
    opt.delta_exponent = 0.5;
    opt.normal_perturbation = 0.4;
    auto bl = make_boundary_layer(body, kV, 1.0, 0.01, opt, 1.0);
    const Vec3 s{0, 0, 1};
    CHECK(norm(bl->velocity(s, 0.5)) < 1e-12);  // stick preserved
    // mid-layer wall-normal velocity present
    const Vec3 xm = 1.03 * s;
    CHECK(std::fabs(dot(bl->velocity(xm, 0.5), s)) > 0.05);

    BoundaryLayerOptions plain;
    plain.delta_exponent = 0.5;
    BoundaryLayerOptions corr = plain;
    corr.divergence_correction = true;
    auto f0 = make_boundary_layer(body, kV, 1.0, 0.04, plain, 1.0);
    auto f1 = make_boundary_layer(body, kV, 1.0, 0.04, corr, 1.0);
    // near-wall point away from the poles, inside the delta = 0.2 layer
    const Vec3 xl = 1.02 * Vec3{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    CHECK(std::fabs(f1->divergence(xl, 0.5)) < 0.1 * std::fabs(f0->divergence(xl, 0.5)));
}

TEST_CASE("time modulated wrapper") {
    auto base = make_stokes_sphere(kV, 1.0, 0.1, 0.0, 1.0);
    auto f = make_time_modulated(base, 0.3);
    CHECK(!f->steady());
    const Vec3 x{1.5, 0.1, 0.3};
    // time derivative against finite differences
    const double t = 0.37;
    const Vec3 dt_fd = (f->velocity(x, t + 1e-6) - f->velocity(x, t - 1e-6)) / 2e-6;
    CHECK(norm(f->velocity_dt(x, t) - dt_fd) < 1e-7);
    // stick condition preserved
    CHECK(norm(f->velocity({0, 0, 1}, t)) < 1e-13);
}

TEST_CASE("snapshot roundtrip and sampled field") {
    // Sample the Stokes solution on a box beside the sphere (origin excluded).
    auto analytic = make_stokes_sphere(kV, 1.0, 0.05, 0.0, 1.0);
    Snapshot snap;
    snap.origin = {0.5, -0.75, -0.75};
    snap.spacing = {0.0625, 0.0625, 0.0625};
    snap.dims[0] = 33;
    snap.dims[1] = 25;
    snap.dims[2] = 25;
    snap.nu = 0.05;
    SnapshotSlab slab;
    slab.time = 0.5;
    for (int k = 0; k < snap.dims[2]; ++k)
        for (int j = 0; j < snap.dims[1]; ++j)
            for (int i = 0; i < snap.dims[0]; ++i) {
                const Vec3 x = snap.origin + Vec3{i * snap.spacing.x, j * snap.spacing.y,
                                                  k * snap.spacing.z};
                const Vec3 u = analytic->velocity(x, 0.5);
                slab.u1.push_back(u.x);
                slab.u2.push_back(u.y);
                slab.u3.push_back(u.z);
                slab.p.push_back(analytic->pressure(x, 0.5));
            }
    snap.slabs.push_back(slab);

    const std::string path = (std::filesystem::temp_directory_path() / "wf_snap.txt").string();
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    CHECK(back.dims[0] == 33);
    CHECK(back.slabs.size() == 1);
    CHECK(back.slabs[0].u3[100] == slab.u3[100]);  // full round trip

    auto f = make_sampled_field(back, 1.0);
    // interpolation error at an off-grid point is second order in the spacing
    const Vec3 q{1.53, 0.11, 0.21};
    CHECK(norm(f->velocity(q, 0.5) - analytic->velocity(q, 0.5)) < 5e-3);
    CHECK(std::fabs(f->pressure(q, 0.5) - analytic->pressure(q, 0.5)) < 5e-3);
    // out of coverage
    CHECK_THROWS_WITH_AS(f->velocity({3.5, 0, 0}, 0.5), "out of data coverage", DataError);
    // wall pressure extrapolated from the interior along the normal
    auto body = Body::make_sphere(1.0);
    const Vec3 s{1, 0, 0};
    CHECK(std::fabs(f->wall_pressure(*body, s, 0.5) - analytic->pressure(s, 0.5)) < 2e-3);
    // deliberately corrupted data is flagged by the divergence check
    Snapshot bad = back;
    for (std::size_t i = 0; i < bad.slabs[0].u1.size(); i += 7)
        bad.slabs[0].u1[i] += 0.05;
    auto fbad = make_sampled_field(bad, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const Vec3 probe{1.4 + 0.05 * i, 0.03 * i, -0.02 * i};
        worst = std::max(worst, std::fabs(fbad->divergence(probe, 0.5)));
    }
    CHECK(worst > 0.05);
    std::filesystem::remove(path);
}

TEST_CASE("multi-time snapshots interpolate linearly in time") {
    Snapshot snap;
    snap.origin = {1.5, -0.5, -0.5};
    snap.spacing = {0.25, 0.25, 0.25};
    snap.dims[0] = snap.dims[1] = snap.dims[2] = 5;
    snap.nu = 0.0;
    for (double t : {0.25, 0.75}) {
        SnapshotSlab slab;
        slab.time = t;
        const std::size_t n = snap.nodes_per_slab();
        slab.u1.assign(n, t);          // spatially constant, linear in time
        slab.u2.assign(n, 0.0);
        slab.u3.assign(n, 2.0 * t);
        slab.p.assign(n, 1.0 - t);
        snap.slabs.push_back(std::move(slab));
    }
    auto f = make_sampled_field(snap, 1.0);
    CHECK(!f->steady());
    const Vec3 x{2.1, 0.1, 0.1};
    CHECK(f->velocity(x, 0.5).x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f->velocity(x, 0.5).z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f->pressure(x, 0.6) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(norm(f->velocity_dt(x, 0.5) - Vec3{1.0, 0.0, 2.0}) < 1e-6);
}

TEST_CASE("snapshot format errors") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "wf_badsnap.txt").string();
    {
        std::ofstream out(path);
        out << "origin = 0 0 0\nwrong_key = 1\n\n";
    }
    CHECK_THROWS_AS(read_snapshot(path), DataError);
    {
        std::ofstream out(path);
        out << "origin = 0 0 0\nspacing = 1 1 1\ndims = 2 2 2\ntimes = 0.5\nnu = 0\n\n"
               "0 0 0 1\n";  // truncated block
    }
    CHECK_THROWS_AS(read_snapshot(path), DataError);
    fs::remove(path);
}
