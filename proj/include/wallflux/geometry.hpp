#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wallflux/vec.hpp"

namespace wallflux {

/// Surface quadrature over the body boundary: nodes, area weights, unit
/// normals pointing into the exterior flow domain.
struct SurfaceQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<Vec3> normals;
    int order = 0;

    std::size_t size() const { return nodes.size(); }
    double total_weight() const;
};

/// Volume quadrature over a wall-parallel band h_lo < d(x) < h_hi built as the
/// product of a surface rule and a 1D Gauss rule in the normal coordinate.
/// Weights carry the exact offset-surface Jacobian (1+k1 d)(1+k2 d).
struct ShellQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<double> dist;     // d(x) per node
    std::vector<Vec3> foot;       // pi(x) per node
    std::vector<Vec3> normals;    // n(pi(x)) per node
    double h_lo = 0.0, h_hi = 0.0;

    std::size_t size() const { return nodes.size(); }
    double total_weight() const;
};

/// Smooth closed body bounding the exterior flow domain. Provides the
/// level function, distance, nearest-point projection, normals, curvatures
/// and quadrature generators. All operations are pure and thread-safe.
class Body {
public:
    virtual ~Body() = default;

    virtual std::string kind() const = 0;

    /// Level function f with f=0 on the surface, f>0 outside.
    virtual double level(const Vec3& x) const = 0;
    virtual Vec3 level_grad(const Vec3& x) const = 0;

    double tubular_radius() const { return tube_; }

    virtual std::array<Vec3, 2> bounding_box() const = 0;

    /// Distance to the surface. Throws DomainError("point inside body") for
    /// points strictly inside.
    virtual double distance(const Vec3& x) const;

    /// Nearest-point projection onto the surface. Valid in the tubular
    /// neighborhood; throws DomainError("outside tubular neighborhood").
    virtual Vec3 project(const Vec3& x) const;

    /// Unit outward normal at a surface point (pointing into the flow).
    /// Throws DomainError for points off the surface or degenerate gradients.
    Vec3 normal_at(const Vec3& s) const;

    /// Principal curvatures at a surface point, signed so that the offset
    /// area element is (1 + k1 d)(1 + k2 d); positive for convex bodies.
    virtual void curvatures(const Vec3& s, double& k1, double& k2) const = 0;

    /// Laplacian of the distance function at a tube point, from the exact
    /// offset formula k1/(1+k1 d) + k2/(1+k2 d).
    double laplacian_distance(const Vec3& x) const;

    /// Hessian of the distance function at a tube point.
    virtual Mat3 distance_hessian(const Vec3& x) const;

    virtual SurfaceQuadrature surface_quadrature(int order) const = 0;

    ShellQuadrature shell_quadrature(double h, double l, int surf_order, int radial_order) const;
    ShellQuadrature tube_quadrature(double a, int surf_order, int radial_order) const;

    static std::shared_ptr<Body> make_sphere(double radius, double tube_override = 0.0);
    static std::shared_ptr<Body> make_ellipsoid(const Vec3& semi_axes, double tube_override = 0.0);
    static std::shared_ptr<Body> make_implicit(std::function<double(const Vec3&)> f,
                                               std::function<Vec3(const Vec3&)> grad,
                                               double tube_radius);

protected:
    double tube_ = 0.0;
    double surface_tol_ = 1e-9;

    /// Damped Newton solve of the nearest-point stationarity system
    /// x - s = lambda * grad f(s), f(s) = 0.
    Vec3 project_newton(const Vec3& x) const;

    /// Hessian of the level function (for Newton); default is a finite
    /// difference of level_grad.
    virtual Mat3 level_hessian(const Vec3& s) const;

private:
    ShellQuadrature band_quadrature(double h_lo, double h_hi, int surf_order,
                                    int radial_order) const;
};

}  // namespace wallflux
