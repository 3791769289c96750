#include "wallflux/profiles.hpp"

#include <cmath>

#include "wallflux/quadrature.hpp"

namespace wallflux {

double bump01(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s)));
}

double bump01_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double g = s * (1.0 - s);
    const double gp = 1.0 - 2.0 * s;
    return bump01(s) * gp / (g * g);
}

double bump01_integral() {
    static const double value = integrate_panels([](double t) { return bump01(t); }, 0.0, 1.0, 32, 8);
    return value;
}

double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    // Symmetric bump: integrate over the shorter half for accuracy.
    if (s <= 0.5) return integrate_panels([](double t) { return bump01(t); }, 0.0, s, 32, 4) / bump01_integral();
    return 1.0 - integrate_panels([](double t) { return bump01(t); }, s, 1.0, 32, 4) / bump01_integral();
}

double smoothstep_deriv(double s) { return bump01(s) / bump01_integral(); }

double smoothstep_deriv_sup() {
    static const double value = bump01(0.5) / bump01_integral();
    return value;
}

double cutoff_exp(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return std::exp(-s / (1.0 - s));
}

// The cutoff is only used on s >= 0; at s = 0 the derivatives are the
// one-sided limits from inside the support.
double cutoff_exp_deriv(double s) {
    if (s < 0.0 || s >= 1.0) return 0.0;
    const double q = 1.0 - s;
    return -cutoff_exp(s) / (q * q);
}

double cutoff_exp_deriv2(double s) {
    if (s < 0.0 || s >= 1.0) return 0.0;
    const double q = 1.0 - s;
    // d/ds[-w/q^2] = -w'/q^2 - 2w/q^3
    return cutoff_exp(s) * (1.0 / (q * q * q * q) - 2.0 / (q * q * q));
}

double mollifier_norm_constant() {
    // 4*pi*int_0^1 exp(-1/(1-r^2)) r^2 dr, inverted.
    static const double value = [] {
        const double raw = integrate_panels(
            [](double r) { return std::exp(-1.0 / (1.0 - r * r)) * r * r; }, 0.0, 1.0, 32, 8);
        return 1.0 / (4.0 * M_PI * raw);
    }();
    return value;
}

double mollifier_radial(double r) {
    if (r >= 1.0) return 0.0;
    return mollifier_norm_constant() * std::exp(-1.0 / (1.0 - r * r));
}

}  // namespace wallflux
