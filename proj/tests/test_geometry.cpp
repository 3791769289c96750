#include <doctest.h>

#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/fd.hpp"
#include "wallflux/geometry.hpp"

using namespace wallflux;

TEST_CASE("sphere distance") {
    auto body = Body::make_sphere(1.0);
    CHECK(body->distance({2, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(body->distance({0, 0, 1}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_WITH_AS(body->distance({0.3, 0.1, 0.0}), "point inside body", DomainError);
}

TEST_CASE("ellipsoid distance on the major axis") {
    auto body = Body::make_ellipsoid({2, 1, 1});
    CHECK(body->distance({4, 0, 0}) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("sphere projection") {
    auto body = Body::make_sphere(1.0, 1.5);
    const Vec3 p = body->project({2, 0, 0});
    CHECK(norm(p - Vec3{1, 0, 0}) < 1e-14);
    // idempotence on surface points
    const Vec3 s{0.6, 0.64, std::sqrt(1.0 - 0.36 - 0.4096)};
    CHECK(norm(body->project(s) - s) < 1e-12);
    auto tight = Body::make_sphere(1.0);
    CHECK_THROWS_WITH_AS(tight->project({2, 0, 0}), "outside tubular neighborhood", DomainError);
}

TEST_CASE("ellipsoid projection against dense surface argmin") {
    auto body = Body::make_ellipsoid({2, 1, 1});
    const Vec3 x{1.5, 0.8, 0.0};
    const Vec3 p = body->project(x);
    // brute-force argmin over a fine parametric mesh
    double best = 1e30;
    Vec3 best_s{};
    for (int i = 0; i <= 1500; ++i) {
        const double th = M_PI * i / 1500.0;
        for (int j = 0; j <= 1500; ++j) {
            const double ph = 2.0 * M_PI * j / 1500.0;
            const Vec3 s{2.0 * std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                         std::cos(th)};
            const double d = norm(x - s);
            if (d < best) {
                best = d;
                best_s = s;
            }
        }
    }
    CHECK(norm(p - best_s) < 8e-3);  // mesh resolution limited
    CHECK(std::fabs(norm(x - p) - best) < 1e-4);
    CHECK(norm(x - p) <= best + 1e-12);  // projection at least as close as the mesh argmin
    // stationarity: x - p parallel to the level gradient
    const Vec3 g = normalized(body->level_grad(p));
    const Vec3 r = normalized(x - p);
    CHECK(norm(cross(g, r)) < 1e-10);
}

TEST_CASE("projection idempotence and tube perturbation stability") {
    auto body = Body::make_ellipsoid({2, 1, 1});
    const Vec3 x{1.5, 0.8, 0.1};
    const Vec3 p = body->project(x);
    CHECK(norm(body->project(p) - p) < 1e-10);
    // perturbed tube point projects near the unperturbed foot
    const Vec3 p2 = body->project(x + Vec3{1e-6, -1e-6, 1e-6});
    CHECK(norm(p2 - p) < 1e-4);
}

TEST_CASE("normals") {
    auto sphere = Body::make_sphere(1.0);
    CHECK(norm(sphere->normal_at({0, 0, 1}) - Vec3{0, 0, 1}) < 1e-14);
    auto ell = Body::make_ellipsoid({2, 1, 1});
    CHECK(norm(ell->normal_at({2, 0, 0}) - Vec3{1, 0, 0}) < 1e-12);
    // |n| = 1 and match against the finite-difference gradient of the level
    const Vec3 s = ell->project({1.5, 0.9, 0.3});
    const Vec3 n = ell->normal_at(s);
    CHECK(std::fabs(norm(n) - 1.0) < 1e-13);
    Vec3 fdg;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        fdg[j] = fd::deriv1([&](double t) { return ell->level(s + t * e); }, 1e-5);
    }
    CHECK(norm(normalized(fdg) - n) < 1e-9);
}

TEST_CASE("degenerate surface point is rejected") {
    auto flat = Body::make_implicit([](const Vec3& x) { return x.x * x.x * x.x; },
                                    [](const Vec3& x) {
                                        return Vec3{3.0 * x.x * x.x, 0.0, 0.0};
                                    },
                                    0.5);
    CHECK_THROWS_WITH_AS(flat->normal_at({0, 0.2, 0.1}), "degenerate surface point", DomainError);
}

TEST_CASE("implicit bodies have no quadrature") {
    auto imp = Body::make_implicit([](const Vec3& x) { return norm(x) - 1.0; },
                                   [](const Vec3& x) { return normalized(x); }, 0.5);
    CHECK_THROWS_AS(imp->surface_quadrature(8), DomainError);
    CHECK(imp->distance({2, 0, 0}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sphere surface quadrature oracles") {
    auto body = Body::make_sphere(1.0);
    const SurfaceQuadrature sq = body->surface_quadrature(24);
    CHECK(std::fabs(sq.total_weight() - 4.0 * M_PI) < 1e-12);
    Vec3 nsum{};
    double xdotn = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        CHECK(sq.weights[i] > 0.0);
        CHECK(std::fabs(norm(sq.normals[i]) - 1.0) < 1e-14);
        nsum += sq.weights[i] * sq.normals[i];
        xdotn += sq.weights[i] * dot(sq.nodes[i], sq.normals[i]);
    }
    CHECK(norm(nsum) < 1e-12);
    // divergence theorem: integral of x.n equals three times the volume
    CHECK(std::fabs(xdotn - 4.0 * M_PI) < 1e-10);
}

TEST_CASE("ellipsoid area against the prolate closed form") {
    auto body = Body::make_ellipsoid({2, 1, 1});
    const SurfaceQuadrature sq = body->surface_quadrature(32);
    const double a = 2.0, b = 1.0;
    const double e = std::sqrt(1.0 - b * b / (a * a));
    const double area = 2.0 * M_PI * b * b * (1.0 + (a / (b * e)) * std::asin(e));
    CHECK(std::fabs(sq.total_weight() - area) < 1e-8 * area);
}

TEST_CASE("quadrature error decreases at the rule's order") {
    auto body = Body::make_sphere(1.0);
    const double c = 0.8;
    const double exact = 2.0 * M_PI * 2.0 * std::sinh(c) / c;
    double prev = 1e30;
    for (int order : {4, 6, 8}) {
        const SurfaceQuadrature sq = body->surface_quadrature(order);
        double got = 0.0;
        for (std::size_t i = 0; i < sq.size(); ++i)
            got += sq.weights[i] * std::exp(c * sq.nodes[i].z);
        const double err = std::fabs(got - exact);
        CHECK(err < 0.5 * prev);
        prev = err;
    }
}

TEST_CASE("shell quadrature") {
    auto body = Body::make_sphere(1.0);
    const ShellQuadrature sh = body->shell_quadrature(0.1, 0.05, 20, 12);
    const double exact = (4.0 * M_PI / 3.0) * (std::pow(1.15, 3) - std::pow(1.10, 3));
    CHECK(std::fabs(sh.total_weight() - exact) < 1e-10);
    for (std::size_t i = 0; i < sh.size(); ++i) {
        CHECK(sh.dist[i] > 0.1);
        CHECK(sh.dist[i] < 0.15);
        CHECK(sh.weights[i] > 0.0);
        CHECK(std::fabs(body->distance(sh.nodes[i]) - sh.dist[i]) < 1e-12);
    }
    CHECK_THROWS_AS(body->shell_quadrature(0.4, 0.2, 8, 4), DomainError);  // band exits tube
}

TEST_CASE("tube quadrature volume and refinement") {
    auto body = Body::make_sphere(1.0, 0.75);
    const ShellQuadrature tq = body->tube_quadrature(0.5, 24, 16);
    const double exact = (4.0 * M_PI / 3.0) * (std::pow(1.5, 3) - 1.0);
    CHECK(std::fabs(tq.total_weight() - exact) < 1e-10);
    for (std::size_t i = 0; i < tq.size(); ++i) {
        CHECK(tq.dist[i] > 0.0);
        CHECK(tq.dist[i] < 0.5);
    }
    // smooth non-polynomial integrand: error decreases under refinement
    auto integral = [&](int ro) {
        const ShellQuadrature q = body->tube_quadrature(0.5, 16, ro);
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += q.weights[i] / (1.0 + q.dist[i] * q.dist[i]);
        return acc;
    };
    const double ref = integral(48);
    const double e1 = std::fabs(integral(4) - ref);
    const double e2 = std::fabs(integral(8) - ref);
    CHECK(e2 < 0.25 * e1);
}

TEST_CASE("distance gradient equals the transported normal") {
    auto body = Body::make_ellipsoid({2, 1, 1});
    const Vec3 x{1.7, 0.6, 0.2};
    const Vec3 n = body->normal_at(body->project(x));
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        const double fd1 = fd::deriv1([&](double t) { return body->distance(x + t * e); }, 1e-5);
        CHECK(std::fabs(fd1 - n[j]) < 1e-8);
    }
}

TEST_CASE("curvatures") {
    auto sphere = Body::make_sphere(2.0);
    double k1 = 0, k2 = 0;
    sphere->curvatures({0, 0, 2}, k1, k2);
    CHECK(k1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k2 == doctest::Approx(0.5).epsilon(1e-12));
    auto ell = Body::make_ellipsoid({2, 1, 1});
    ell->curvatures({2, 0, 0}, k1, k2);
    // tip of the major axis: both principal curvatures a/b^2
    CHECK(k1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(k2 == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("distance hessian matches finite differences (sphere closed form)") {
    auto body = Body::make_sphere(1.0);
    const Vec3 x{1.1, 0.3, -0.2};
    const Mat3 h = body->distance_hessian(x);
    const double r = norm(x);
    const Vec3 xh = x / r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = ((i == j ? 1.0 : 0.0) - xh[i] * xh[j]) / r;
            CHECK(std::fabs(h.m[i][j] - expect) < 1e-8);
        }
    CHECK(std::fabs(body->laplacian_distance(x) - 2.0 / r) < 1e-10);
}
