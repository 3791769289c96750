#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wallflux {

/// One-dimensional Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights for an n-point Gauss-Legendre rule; cached per order.
const GaussRule& gauss_legendre(int n);

/// Gauss rule with respect to a nonnegative weight function on [a, b]:
/// sum w_i f(x_i) integrates weight(x) f(x) exactly for polynomial f up to
/// degree 2n-1. Built by the Stieltjes procedure on a dense reference rule.
GaussRule gauss_weighted(const std::function<double(double)>& weight, double a, double b, int n);

/// Integrate f over [a, b] with an n-point Gauss rule.
template <typename F>
double integrate_gauss(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

/// Integrate f over [a, b] split into `panels` equal Gauss panels of order n each.
template <typename F>
double integrate_panels(F&& f, double a, double b, int n, int panels) {
    double s = 0.0;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += integrate_gauss(f, a + p * w, a + (p + 1) * w, n);
    return s;
}

}  // namespace wallflux
