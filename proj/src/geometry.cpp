#include "wallflux/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

double SurfaceQuadrature::total_weight() const {
    std::vector<double> ones(weights.size(), 1.0);
    return kernels::weighted_sum(weights.data(), ones.data(), weights.size());
}

double ShellQuadrature::total_weight() const {
    std::vector<double> ones(weights.size(), 1.0);
    return kernels::weighted_sum(weights.data(), ones.data(), weights.size());
}

// ---------------------------------------------------------------------------
// Body base: generic Newton projection and band quadrature assembly.
// ---------------------------------------------------------------------------

double Body::distance(const Vec3& x) const {
    if (level(x) < -surface_tol_) throw DomainError("point inside body");
    const Vec3 s = project_newton(x);
    return norm(x - s);
}

Vec3 Body::project(const Vec3& x) const {
    if (level(x) < -surface_tol_) throw DomainError("point inside body");
    const Vec3 s = project_newton(x);
    if (norm(x - s) >= tube_ + surface_tol_) throw DomainError("outside tubular neighborhood");
    return s;
}

Vec3 Body::normal_at(const Vec3& s) const {
    if (std::fabs(level(s)) > 1e-6) throw DomainError("point not on surface");
    const Vec3 g = level_grad(s);
    const double gn = norm(g);
    if (gn < 1e-12) throw DomainError("degenerate surface point");
    return g / gn;
}

double Body::laplacian_distance(const Vec3& x) const {
    const Vec3 s = project(x);
    const double d = norm(x - s);
    double k1 = 0.0, k2 = 0.0;
    curvatures(s, k1, k2);
    return k1 / (1.0 + k1 * d) + k2 / (1.0 + k2 * d);
}

Mat3 Body::distance_hessian(const Vec3& x) const {
    // Hessian of d is the gradient of the transported normal field n(pi(x)).
    // Differentiate n(pi(x + h e_j)) column by column; the field is smooth on
    // the body scale so a moderate step is accurate.
    const double h = 1e-5 * std::max(tube_, 1e-3);
    Mat3 hess;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        auto ncomp = [&](double t) {
            Vec3 xp = x + t * e;
            Vec3 s = project_newton(xp);
            Vec3 g = level_grad(s);
            return normalized(g);
        };
        const Vec3 np = ncomp(h), nm = ncomp(-h);
        const Vec3 np2 = ncomp(0.5 * h), nm2 = ncomp(-0.5 * h);
        for (int i = 0; i < 3; ++i) {
            const double d1 = (np[i] - nm[i]) / (2.0 * h);
            const double d2 = (np2[i] - nm2[i]) / h;
            hess.m[i][j] = (4.0 * d2 - d1) / 3.0;
        }
    }
    return hess;
}

Mat3 Body::level_hessian(const Vec3& s) const {
    const double h = 1e-5;
    Mat3 hess;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        const Vec3 gp = level_grad(s + h * e), gm = level_grad(s - h * e);
        for (int i = 0; i < 3; ++i) hess.m[i][j] = (gp[i] - gm[i]) / (2.0 * h);
    }
    return hess;
}

Vec3 Body::project_newton(const Vec3& x) const {
    // Unknowns (s, lambda): G = [s + lambda*grad f(s) - x; f(s)] = 0.
    // Damped steps, tolerance 1e-12, at most 50 iterations.
    Vec3 s = x;
    {
        // Radial initial guess: pull x onto the surface along the ray to the
        // body center (assumed at the origin for catalog bodies).
        double f0 = level(x);
        if (f0 > 0.0) {
            double lo = 0.0, hi = 1.0;
            // level(t*x) decreases toward the center; bisect the ray.
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (level(mid * x) > 0.0 ? hi : lo) = mid;
            }
            s = 0.5 * (lo + hi) * x;
        }
    }
    Vec3 g = level_grad(s);
    double lambda = dot(x - s, g) / std::max(norm2(g), 1e-300);

    auto residual = [&](const Vec3& sv, double lv) {
        const Vec3 gv = level_grad(sv);
        const Vec3 r1 = sv + lv * gv - x;
        const double r2 = level(sv);
        return std::sqrt(norm2(r1) + r2 * r2);
    };

    double res = residual(s, lambda);
    for (int it = 0; it < 50 && res > 1e-12; ++it) {
        g = level_grad(s);
        const Mat3 hess = level_hessian(s);
        // 4x4 system: [I + lambda*H, g; g^T, 0] [ds, dl] = -[r1; r2]
        double a[4][5];
        const Vec3 r1 = s + lambda * g - x;
        const double r2 = level(s);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) a[i][j] = (i == j ? 1.0 : 0.0) + lambda * hess.m[i][j];
            a[i][3] = g[i];
            a[i][4] = -r1[i];
        }
        for (int j = 0; j < 3; ++j) a[3][j] = g[j];
        a[3][3] = 0.0;
        a[3][4] = -r2;
        // Gaussian elimination with partial pivoting.
        for (int c = 0; c < 4; ++c) {
            int piv = c;
            for (int r = c + 1; r < 4; ++r)
                if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
            std::swap(a[c], a[piv]);
            if (std::fabs(a[c][c]) < 1e-300) throw DomainError("projection solve degenerate");
            for (int r = c + 1; r < 4; ++r) {
                const double f = a[r][c] / a[c][c];
                for (int k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
            }
        }
        double sol[4];
        for (int r = 3; r >= 0; --r) {
            double acc = a[r][4];
            for (int k = r + 1; k < 4; ++k) acc -= a[r][k] * sol[k];
            sol[r] = acc / a[r][r];
        }
        const Vec3 ds{sol[0], sol[1], sol[2]};
        const double dl = sol[3];
        double step = 1.0;
        for (int back = 0; back < 30; ++back) {
            const Vec3 st = s + step * ds;
            const double lt = lambda + step * dl;
            const double rt = residual(st, lt);
            if (rt < res) {
                s = st;
                lambda = lt;
                res = rt;
                break;
            }
            step *= 0.5;
        }
    }
    if (res > 1e-8) throw DomainError("projection did not converge");
    return s;
}

ShellQuadrature Body::band_quadrature(double h_lo, double h_hi, int surf_order,
                                      int radial_order) const {
    if (h_hi <= h_lo || h_lo < 0.0) throw DomainError("invalid band");
    if (h_hi > tube_ + surface_tol_) throw DomainError("band exits tubular neighborhood");
    const SurfaceQuadrature sq = surface_quadrature(surf_order);
    const GaussRule& gr = gauss_legendre(radial_order);
    ShellQuadrature shell;
    shell.h_lo = h_lo;
    shell.h_hi = h_hi;
    const std::size_t n = sq.size() * gr.nodes.size();
    shell.nodes.reserve(n);
    shell.weights.reserve(n);
    shell.dist.reserve(n);
    shell.foot.reserve(n);
    shell.normals.reserve(n);
    const double mid = 0.5 * (h_lo + h_hi), half = 0.5 * (h_hi - h_lo);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        double k1 = 0.0, k2 = 0.0;
        curvatures(sq.nodes[i], k1, k2);
        for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
            const double d = mid + half * gr.nodes[q];
            const double jac = (1.0 + k1 * d) * (1.0 + k2 * d);
            shell.nodes.push_back(sq.nodes[i] + d * sq.normals[i]);
            shell.weights.push_back(sq.weights[i] * gr.weights[q] * half * jac);
            shell.dist.push_back(d);
            shell.foot.push_back(sq.nodes[i]);
            shell.normals.push_back(sq.normals[i]);
        }
    }
    return shell;
}

ShellQuadrature Body::shell_quadrature(double h, double l, int surf_order,
                                       int radial_order) const {
    if (h <= 0.0 || l <= 0.0) throw DomainError("shell parameters must be positive");
    return band_quadrature(h, h + l, surf_order, radial_order);
}

ShellQuadrature Body::tube_quadrature(double a, int surf_order, int radial_order) const {
    if (a <= 0.0 || a >= tube_ + surface_tol_) throw DomainError("tube width out of range");
    return band_quadrature(0.0, a, surf_order, radial_order);
}

// ---------------------------------------------------------------------------
// Sphere: closed forms throughout.
// ---------------------------------------------------------------------------

namespace {

class SphereBody final : public Body {
public:
    SphereBody(double radius, double tube_override) : radius_(radius) {
        tube_ = tube_override > 0.0 ? tube_override : 0.5 * radius;
    }

    std::string kind() const override { return "sphere"; }

    double level(const Vec3& x) const override { return norm(x) - radius_; }
    Vec3 level_grad(const Vec3& x) const override { return normalized(x); }

    std::array<Vec3, 2> bounding_box() const override {
        const double r = radius_ + tube_;
        return {Vec3{-r, -r, -r}, Vec3{r, r, r}};
    }

    double distance(const Vec3& x) const override {
        const double d = norm(x) - radius_;
        if (d < -surface_tol_) throw DomainError("point inside body");
        return std::max(d, 0.0);
    }

    Vec3 project(const Vec3& x) const override {
        const double r = norm(x);
        if (r - radius_ < -surface_tol_) throw DomainError("point inside body");
        if (r - radius_ >= tube_ + surface_tol_) throw DomainError("outside tubular neighborhood");
        return (radius_ / r) * x;
    }

    void curvatures(const Vec3&, double& k1, double& k2) const override {
        k1 = k2 = 1.0 / radius_;
    }

    Mat3 distance_hessian(const Vec3& x) const override {
        const double r = norm(x);
        const Vec3 xh = x / r;
        Mat3 hess = Mat3::identity();
        hess -= outer(xh, xh);
        return (1.0 / r) * hess;
    }

    SurfaceQuadrature surface_quadrature(int order) const override {
        if (order < 1) throw DomainError("quadrature order must be >= 1");
        SurfaceQuadrature sq;
        sq.order = order;
        const GaussRule& gmu = gauss_legendre(order);
        const int nphi = 2 * order;
        const double dphi = 2.0 * M_PI / nphi;
        sq.nodes.reserve(order * nphi);
        for (int i = 0; i < order; ++i) {
            const double mu = gmu.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int j = 0; j < nphi; ++j) {
                const double phi = dphi * (j + 0.5);
                const Vec3 n{st * std::cos(phi), st * std::sin(phi), mu};
                sq.nodes.push_back(radius_ * n);
                sq.normals.push_back(n);
                sq.weights.push_back(radius_ * radius_ * gmu.weights[i] * dphi);
            }
        }
        return sq;
    }

private:
    double radius_;
};

// ---------------------------------------------------------------------------
// Ellipsoid: quadric level set, Newton projection, closed-form curvatures.
// ---------------------------------------------------------------------------

class EllipsoidBody final : public Body {
public:
    EllipsoidBody(const Vec3& semi, double tube_override) : semi_(semi) {
        const double rmin = std::min({semi.x, semi.y, semi.z});
        tube_ = tube_override > 0.0 ? tube_override : 0.4 * rmin;
    }

    std::string kind() const override { return "ellipsoid"; }

    double level(const Vec3& x) const override {
        // Scaled so the gradient has magnitude ~1 near the surface.
        const double q = x.x * x.x / (semi_.x * semi_.x) + x.y * x.y / (semi_.y * semi_.y) +
                         x.z * x.z / (semi_.z * semi_.z);
        return 0.5 * (q - 1.0);
    }

    Vec3 level_grad(const Vec3& x) const override {
        return {x.x / (semi_.x * semi_.x), x.y / (semi_.y * semi_.y), x.z / (semi_.z * semi_.z)};
    }

    std::array<Vec3, 2> bounding_box() const override {
        const Vec3 r = semi_ + Vec3{tube_, tube_, tube_};
        return {-r, r};
    }

    void curvatures(const Vec3& s, double& k1, double& k2) const override {
        // Shape operator of the level set: P H P / |grad f| restricted to the
        // tangent plane, H = diag(1/a^2, 1/b^2, 1/c^2).
        const Vec3 g = level_grad(s);
        const double gn = norm(g);
        const Vec3 n = g / gn;
        Vec3 t1 = std::fabs(n.x) < 0.9 ? cross(n, Vec3{1, 0, 0}) : cross(n, Vec3{0, 1, 0});
        t1 = normalized(t1);
        const Vec3 t2 = cross(n, t1);
        const Vec3 h{1.0 / (semi_.x * semi_.x), 1.0 / (semi_.y * semi_.y),
                     1.0 / (semi_.z * semi_.z)};
        auto hv = [&](const Vec3& v) { return Vec3{h.x * v.x, h.y * v.y, h.z * v.z}; };
        const double a11 = dot(t1, hv(t1)) / gn;
        const double a22 = dot(t2, hv(t2)) / gn;
        const double a12 = dot(t1, hv(t2)) / gn;
        const double tr = a11 + a22;
        const double det = a11 * a22 - a12 * a12;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        k1 = 0.5 * tr + disc;
        k2 = 0.5 * tr - disc;
    }

    Mat3 level_hessian(const Vec3&) const override {
        Mat3 hess;
        hess.m[0][0] = 1.0 / (semi_.x * semi_.x);
        hess.m[1][1] = 1.0 / (semi_.y * semi_.y);
        hess.m[2][2] = 1.0 / (semi_.z * semi_.z);
        return hess;
    }

    SurfaceQuadrature surface_quadrature(int order) const override {
        if (order < 1) throw DomainError("quadrature order must be >= 1");
        SurfaceQuadrature sq;
        sq.order = order;
        const GaussRule& gmu = gauss_legendre(order);
        const int nphi = 2 * order;
        const double dphi = 2.0 * M_PI / nphi;
        for (int i = 0; i < order; ++i) {
            const double mu = gmu.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int j = 0; j < nphi; ++j) {
                const double phi = dphi * (j + 0.5);
                const double cp = std::cos(phi), sp = std::sin(phi);
                const Vec3 s{semi_.x * st * cp, semi_.y * st * sp, semi_.z * mu};
                // dS = |d_theta s x d_phi s| dtheta dphi, converted to the
                // Gauss variable mu = cos(theta).
                const Vec3 dth{semi_.x * mu * cp, semi_.y * mu * sp, -semi_.z * st};
                const Vec3 dph{-semi_.x * st * sp, semi_.y * st * cp, 0.0};
                const double jac = norm(cross(dth, dph));
                sq.nodes.push_back(s);
                sq.normals.push_back(normalized(level_grad(s)));
                sq.weights.push_back(gmu.weights[i] * dphi * jac / st);
            }
        }
        return sq;
    }

private:
    Vec3 semi_;
};

// ---------------------------------------------------------------------------
// Implicit body: user level function; projection only, no quadrature.
// ---------------------------------------------------------------------------

class ImplicitBody final : public Body {
public:
    ImplicitBody(std::function<double(const Vec3&)> f, std::function<Vec3(const Vec3&)> g,
                 double tube)
        : f_(std::move(f)), g_(std::move(g)) {
        tube_ = tube;
    }

    std::string kind() const override { return "implicit"; }
    double level(const Vec3& x) const override { return f_(x); }
    Vec3 level_grad(const Vec3& x) const override { return g_(x); }

    std::array<Vec3, 2> bounding_box() const override {
        return {Vec3{-1e30, -1e30, -1e30}, Vec3{1e30, 1e30, 1e30}};
    }

    void curvatures(const Vec3&, double&, double&) const override {
        throw DomainError("curvatures unsupported for implicit bodies");
    }

    SurfaceQuadrature surface_quadrature(int) const override {
        throw DomainError("unsupported surface kind for quadrature: implicit");
    }

private:
    std::function<double(const Vec3&)> f_;
    std::function<Vec3(const Vec3&)> g_;
};

}  // namespace

std::shared_ptr<Body> Body::make_sphere(double radius, double tube_override) {
    if (radius <= 0.0) throw DomainError("sphere radius must be positive");
    return std::make_shared<SphereBody>(radius, tube_override);
}

std::shared_ptr<Body> Body::make_ellipsoid(const Vec3& semi_axes, double tube_override) {
    if (semi_axes.x <= 0.0 || semi_axes.y <= 0.0 || semi_axes.z <= 0.0)
        throw DomainError("ellipsoid semi-axes must be positive");
    return std::make_shared<EllipsoidBody>(semi_axes, tube_override);
}

std::shared_ptr<Body> Body::make_implicit(std::function<double(const Vec3&)> f,
                                          std::function<Vec3(const Vec3&)> grad,
                                          double tube_radius) {
    return std::make_shared<ImplicitBody>(std::move(f), std::move(grad), tube_radius);
}

}  // namespace wallflux
