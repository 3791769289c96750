#pragma once

namespace wallflux {
namespace fd {

/// First derivative at 0 of a 1D callable, central difference plus one
/// Richardson level: O(h^4) truncation.
template <typename F>
double deriv1(F&& f, double h) {
    const double d1 = (f(h) - f(-h)) / (2.0 * h);
    const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

/// One-sided first derivative at 0 using points on side*[0, 2h]; second order
/// plus one Richardson level.
template <typename F>
double deriv1_onesided(F&& f, double h, int side) {
    const double s = side >= 0 ? 1.0 : -1.0;
    auto d = [&](double hh) {
        return s * (-3.0 * f(0.0) + 4.0 * f(s * hh) - f(2.0 * s * hh)) / (2.0 * hh);
    };
    const double d1 = d(h);
    const double d2 = d(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

/// Second derivative at 0, central plus one Richardson level.
template <typename F>
double deriv2(F&& f, double h) {
    auto d = [&](double hh) { return (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh); };
    const double d1 = d(h);
    const double d2 = d(0.5 * h);
    return (16.0 * d2 - d1) / 15.0;
}

/// One-sided second derivative at 0 using side*[0, 3h]; second order plus one
/// Richardson level.
template <typename F>
double deriv2_onesided(F&& f, double h, int side) {
    const double s = side >= 0 ? 1.0 : -1.0;
    auto d = [&](double hh) {
        return (2.0 * f(0.0) - 5.0 * f(s * hh) + 4.0 * f(2.0 * s * hh) - f(3.0 * s * hh)) /
               (hh * hh);
    };
    const double d1 = d(h);
    const double d2 = d(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace fd
}  // namespace wallflux
