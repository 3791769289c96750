#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wallflux/budgets.hpp"
#include "wallflux/fields.hpp"
#include "wallflux/sections.hpp"

namespace wallflux {

/// Log-log least squares fit of |value| against the abscissa. Points whose
/// error estimate exceeds 10% of the value are dropped; at least 3 points are
/// required for a valid fit.
struct RateFit {
    std::vector<double> abscissa;
    std::vector<double> values;
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double fit_residual = 0.0;
    int points_used = 0;
    bool valid = false;
};

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& yerr);

/// Sequence-acceleration estimate of the limit of v(h) as h -> 0 for values on
/// a geometric abscissa grid, assuming v = L + C h^p (+ higher orders); two
/// extrapolation levels when three points are available.
double richardson_limit(const std::vector<double>& abscissa, const std::vector<double>& values,
                        double p);

struct ScaleSweepPoint {
    double h = 0.0, ell = 0.0;
    PairingValue flux;
    double gap_abs = 0.0;
    double gap_rel = 0.0;
    bool ok = false;
    std::string error;
};

struct ScaleSweepResult {
    std::string field_id, section_id;
    std::string target_kind;
    double target = 0.0;
    double target_err = 0.0;
    std::vector<ScaleSweepPoint> points;
    RateFit gap_fit;
    double limit_estimate = 0.0;  ///< extrapolated flux pairing at h -> 0
    double limit_gap_abs = 0.0;
    double limit_gap_rel = 0.0;
};

/// Sweep the momentum-flux pairing over a decreasing h list (ell = ratio * h),
/// against the wall-pairing target: "wall_shear" for tangential sections,
/// "wall_pressure" (with the flux-pairing sign) for normal ones, or "zero".
/// A failed point is recorded and the sweep continues.
ScaleSweepResult run_scale_sweep(const FlowField& field, const Body& body,
                                 const ExtendedTestField& phi, const std::vector<double>& h_list,
                                 double ell_ratio, const std::string& target_kind,
                                 const QuadratureSpec& spec, int threads = 1);

struct ViscositySweepPoint {
    double nu = 0.0;
    double tau_pairing = 0.0;
    double pressure_pairing = 0.0;
    double tau_err = 0.0;
    bool ok = false;
    std::string error;
};

struct ViscositySweepResult {
    std::string section_id;
    std::vector<ViscositySweepPoint> points;
    std::vector<double> cauchy;  ///< |tau_{k+1} - tau_k|
    RateFit tau_fit;             ///< |<tau_w,psi>| against nu
    double tau_limit_estimate = 0.0;
};

/// Wall pairings across a viscosity family; the builder maps nu to the field.
ViscositySweepResult run_viscosity_sweep(
    const std::function<std::shared_ptr<FlowField>(double)>& family, const Body& body,
    const SurfaceSection& tangential, const SurfaceSection& normal,
    const std::vector<double>& nu_list, const QuadratureSpec& spec, int threads = 1);

/// Shell sup-norms reported as an interval: node maximum plus a Lipschitz
/// inflation term (measured gradient bound times node spacing).
struct NormInterval {
    double lower = 0.0;
    double upper = 0.0;
};

struct NormCurvePoint {
    double delta = 0.0;
    NormInterval value;
};

/// L2-in-time of the near-wall sup of |n.u| per probe distance delta.
std::vector<NormCurvePoint> estimate_no_flow_through(const FlowField& field, const Body& body,
                                                     const std::vector<double>& delta_list,
                                                     const QuadratureSpec& spec);

/// L2-in-time of the sup of |u| over the eps-shell.
NormInterval estimate_near_wall_sup(const FlowField& field, const Body& body, double eps,
                                    const QuadratureSpec& spec);

struct FilterCurvePoint {
    double h = 0.0, ell = 0.0;
    double norm = 0.0;
};

/// || eta_{h,l} f_bar_l - f || in L^p((0,T) x K) on a wall annulus
/// K = {d0 <= d <= d1}, along the scale list with ell = ratio * h.
std::vector<FilterCurvePoint> filter_convergence_curve(
    const std::function<double(const Vec3&, double)>& f, bool f_steady, const FlowField* field,
    const Body& body, double d0, double d1, const std::vector<double>& h_list, double ell_ratio,
    int p, const QuadratureSpec& spec, double horizon);

/// Convenience overload for a velocity component (0..2) or pressure (3).
std::vector<FilterCurvePoint> filter_convergence_curve_component(
    const FlowField& field, const Body& body, int component, double d0, double d1,
    const std::vector<double>& h_list, double ell_ratio, int p, const QuadratureSpec& spec);

}  // namespace wallflux
