#pragma once

#include <vector>

#include "wallflux/fields.hpp"
#include "wallflux/geometry.hpp"
#include "wallflux/vec.hpp"

namespace wallflux {

/// Quadrature rule for convolution against the radial mollifier on the unit
/// ball: Gauss-Legendre in radius (with the r^2 measure folded into the
/// weights together with the kernel value) times a spherical product rule.
/// For a filter scale l, offsets are l * node and weights are unchanged.
class MollifierKernel {
public:
    MollifierKernel(int radial_order, int sphere_order);

    const std::vector<Vec3>& offsets() const { return offsets_; }
    const std::vector<double>& weights() const { return weights_; }
    int radial_order() const { return radial_order_; }
    int sphere_order() const { return sphere_order_; }

    /// Quadrature integral of the kernel; 1 up to rule error.
    double mass() const;

    MollifierKernel refined() const;

private:
    int radial_order_, sphere_order_;
    std::vector<Vec3> offsets_;
    std::vector<double> weights_;
};

/// Mollified scalar: integral of G_l(r) f(x + r) over the unit-l ball.
/// Requires d(x) >= l so the stencil stays inside the flow domain.
template <typename F>
double mollify_scalar(const MollifierKernel& kernel, double l, F&& f, const Vec3& x) {
    double acc = 0.0;
    const auto& off = kernel.offsets();
    const auto& w = kernel.weights();
    for (std::size_t i = 0; i < off.size(); ++i) acc += w[i] * f(x + l * off[i]);
    return acc;
}

/// Mollified field moments at one point: filtered velocity, filtered advective
/// stress (the filter applied to the product u x u), filtered pressure.
struct FilteredState {
    Vec3 u;
    Mat3 stress;
    double p;
};

/// Checked mollification of a flow state; throws DomainError if the stencil
/// exits the domain (d(x) < l).
FilteredState mollify_state(const MollifierKernel& kernel, double l, const FlowField& field,
                            const Body& body, const Vec3& x, double t);

/// Unchecked variant for callers that already guarantee d(x) >= l.
FilteredState mollify_state_unchecked(const MollifierKernel& kernel, double l,
                                      const FlowField& field, const Vec3& x, double t);

Vec3 mollify_vector(const MollifierKernel& kernel, double l,
                    const std::function<Vec3(const Vec3&)>& f, const Vec3& x);

/// Mollified advective stress tensor (filter of the outer product).
Mat3 advective_stress(const MollifierKernel& kernel, double l, const FlowField& field,
                      const Body& body, const Vec3& x, double t);

/// Divergence of the filtered stress by central differences of the filtered
/// tensor at step fd_step.
Vec3 filtered_stress_divergence_fd(const MollifierKernel& kernel, double l,
                                   const FlowField& field, const Vec3& x, double t,
                                   double fd_step);

/// Cross-check route: the filter commutes with derivatives away from the
/// wall, so div(T_l) equals the filter of the pointwise stress divergence.
Vec3 filtered_stress_divergence_direct(const MollifierKernel& kernel, double l,
                                       const FlowField& field, const Vec3& x, double t);

/// Window profile theta_{h,l}: 0 for s <= h, 1 for s >= h+l, a C-infinity
/// nondecreasing smoothstep in between with sup|theta'| <= C/l.
struct WindowProfile {
    double h = 0.0;
    double l = 0.0;

    double value(double s) const;
    double deriv(double s) const;
    /// sup |theta'| bound constant C (of the master smoothstep).
    static double deriv_sup_constant();
};

/// Window field eta(x) = theta(d(x)).
double window_value(const WindowProfile& profile, const Body& body, const Vec3& x);

/// Window gradient theta'(d(x)) n(pi(x)); supported in the transition shell.
Vec3 window_gradient(const WindowProfile& profile, const Body& body, const Vec3& x);

}  // namespace wallflux
