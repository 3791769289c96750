#pragma once

namespace wallflux {

/// The C-infinity bump exp(-1/(s(1-s))) on (0,1), zero elsewhere. All
/// derivatives vanish at both endpoints.
double bump01(double s);
double bump01_deriv(double s);

/// Integral of bump01 over (0,1), computed once to machine precision.
double bump01_integral();

/// Master smoothstep: 0 for s<=0, 1 for s>=1, normalized integral of bump01.
/// C-infinity and nondecreasing.
double smoothstep(double s);
double smoothstep_deriv(double s);

/// sup |smoothstep'| over the real line.
double smoothstep_deriv_sup();

/// C-infinity cutoff exp(-s/(1-s)) on [0,1), zero for s>=1; value 1 and slope
/// -1 at s=0. Used for the canonical extension weight and layer damping.
double cutoff_exp(double s);
double cutoff_exp_deriv(double s);
double cutoff_exp_deriv2(double s);

/// Radial mollifier profile N*exp(-1/(1-r^2)) on the unit ball, normalized so
/// the ball integral of G is 1.
double mollifier_radial(double r);
double mollifier_norm_constant();

}  // namespace wallflux
