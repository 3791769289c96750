#include "wallflux/fields.hpp"

#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/profiles.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

Vec3 FlowField::forcing(const Vec3& x, double t) const {
    // Conservative form: g = du/dt + (grad u) u + u div u + grad p - nu lap u.
    const Mat3 g = velocity_grad(x, t);
    const Vec3 u = velocity(x, t);
    Vec3 adv = g * u + trace(g) * u;
    return velocity_dt(x, t) + adv + pressure_grad(x, t) - nu_ * velocity_laplacian(x, t);
}

double FlowField::wall_pressure(const Body&, const Vec3& s, double t) const {
    return pressure(s, t);
}

StatePoint eval_state(const FlowField& field, const Vec3& x, double t) {
    if (t <= 0.0 || t >= field.horizon()) throw DomainError("time outside horizon");
    return {field.velocity(x, t), field.pressure(x, t)};
}

VelocityGradient grad_velocity(const FlowField& field, const Vec3& x, double t) {
    return {field.velocity_grad(x, t)};
}

WallShearFormulas wall_shear_formulas(const FlowField& field, const Body& body, const Vec3& s,
                                      double t) {
    const double nu = field.viscosity();
    const Vec3 n = body.normal_at(s);
    const VelocityGradient vg = grad_velocity(field, s, t);
    WallShearFormulas f;
    f.from_strain = 2.0 * nu * (vg.strain() * n);
    f.from_normal_deriv = nu * (vg.grad * n);
    f.from_vorticity = nu * cross(vg.vorticity(), n);
    return f;
}

double WallShearFormulas::max_disagreement() const {
    const double a = norm(from_strain - from_normal_deriv);
    const double b = norm(from_strain - from_vorticity);
    const double c = norm(from_normal_deriv - from_vorticity);
    return std::max({a, b, c});
}

Vec3 wall_shear_stress(const FlowField& field, const Body& body, const Vec3& s, double t) {
    if (field.viscosity() == 0.0) return {};
    const Vec3 uw = field.velocity(s, t);
    if (norm(uw) > 1e-6) throw DomainError("no-slip violated; wall shear formulas inequivalent");
    const Vec3 n = body.normal_at(s);
    const VelocityGradient vg = grad_velocity(field, s, t);
    return field.viscosity() * cross(vg.vorticity(), n);
}

DivergenceReport check_divergence_free(const FlowField& field, const Body& body, double band_lo,
                                       double band_hi, int surf_order, int radial_order,
                                       double t) {
    ShellQuadrature q = band_lo <= 0.0
                            ? body.tube_quadrature(band_hi, surf_order, radial_order)
                            : body.shell_quadrature(band_lo, band_hi - band_lo, surf_order,
                                                    radial_order);
    DivergenceReport rep;
    rep.samples = q.size();
    double sum2 = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double div = field.divergence(q.nodes[i], t);
        rep.max_abs = std::max(rep.max_abs, std::fabs(div));
        sum2 += q.weights[i] * div * div;
        wsum += q.weights[i];
    }
    rep.l2 = std::sqrt(sum2 / std::max(wsum, 1e-300));
    return rep;
}

// ---------------------------------------------------------------------------
// Catalog entries
// ---------------------------------------------------------------------------

namespace {

class ZeroField final : public FlowField {
public:
    ZeroField(double p, double horizon) : p_(p) { horizon_ = horizon; }
    std::string id() const override { return "zero"; }
    ResidualClass residual_class() const override { return ResidualClass::EulerExact; }
    bool no_slip_wall() const override { return true; }
    bool impermeable_wall() const override { return true; }
    Vec3 velocity(const Vec3&, double) const override { return {}; }
    double pressure(const Vec3&, double) const override { return p_; }
    Mat3 velocity_grad(const Vec3&, double) const override { return {}; }
    Vec3 velocity_laplacian(const Vec3&, double) const override { return {}; }
    Vec3 pressure_grad(const Vec3&, double) const override { return {}; }
    Vec3 forcing(const Vec3&, double) const override { return {}; }

private:
    double p_;
};

class FreeStreamField final : public FlowField {
public:
    FreeStreamField(const Vec3& v, double p, double horizon) : v_(v), p_(p) {
        horizon_ = horizon;
    }
    std::string id() const override { return "free_stream"; }
    ResidualClass residual_class() const override { return ResidualClass::EulerExact; }
    Vec3 velocity(const Vec3&, double) const override { return v_; }
    double pressure(const Vec3&, double) const override { return p_; }
    Mat3 velocity_grad(const Vec3&, double) const override { return {}; }
    Vec3 velocity_laplacian(const Vec3&, double) const override { return {}; }
    Vec3 pressure_grad(const Vec3&, double) const override { return {}; }
    Vec3 forcing(const Vec3&, double) const override { return {}; }

private:
    Vec3 v_;
    double p_;
};

/// Steady potential flow past a sphere with the Bernoulli pressure; exact
/// unforced Euler solution with impermeable wall.
class PotentialSphereField final : public FlowField {
public:
    PotentialSphereField(const Vec3& v, double a, double p_inf, double horizon)
        : v_(v), a_(a), p_inf_(p_inf) {
        nu_ = 0.0;
        horizon_ = horizon;
    }
    std::string id() const override { return "potential_sphere"; }
    ResidualClass residual_class() const override { return ResidualClass::EulerExact; }
    bool impermeable_wall() const override { return true; }

    Vec3 velocity(const Vec3& x, double) const override {
        const double r2 = norm2(x), r = std::sqrt(r2);
        const double r3 = r * r2, r5 = r3 * r2;
        const double a3 = a_ * a_ * a_;
        return v_ + (0.5 * a3) * (v_ / r3 - (3.0 * dot(v_, x) / r5) * x);
    }

    double pressure(const Vec3& x, double t) const override {
        const Vec3 u = velocity(x, t);
        return p_inf_ + 0.5 * (norm2(v_) - norm2(u));
    }

    Mat3 velocity_grad(const Vec3& x, double) const override {
        const double r2 = norm2(x), r = std::sqrt(r2);
        const double r5 = r2 * r2 * r, r7 = r5 * r2;
        const double a3 = a_ * a_ * a_;
        const double vx = dot(v_, x);
        Mat3 g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = -3.0 * v_[i] * x[j] / r5 - 3.0 * v_[j] * x[i] / r5 -
                           3.0 * vx * (i == j ? 1.0 : 0.0) / r5 + 15.0 * vx * x[i] * x[j] / r7;
                g.m[i][j] = 0.5 * a3 * s;
            }
        return g;
    }

    Vec3 velocity_laplacian(const Vec3&, double) const override { return {}; }

    Vec3 pressure_grad(const Vec3& x, double t) const override {
        // Steady Euler: grad p = -(grad u) u.
        return -1.0 * (velocity_grad(x, t) * velocity(x, t));
    }

    Vec3 forcing(const Vec3&, double) const override { return {}; }

private:
    Vec3 v_;
    double a_, p_inf_;
};

/// Steady Stokes flow past a sphere. Exact solution of the Stokes system; the
/// forcing of the full momentum balance is the neglected inertia (grad u) u.
class StokesSphereField final : public FlowField {
public:
    StokesSphereField(const Vec3& v, double a, double nu, double p_inf, double horizon)
        : v_(v), a_(a), p_inf_(p_inf) {
        nu_ = nu;
        horizon_ = horizon;
    }
    std::string id() const override { return "stokes_sphere"; }
    ResidualClass residual_class() const override { return ResidualClass::StokesExact; }
    bool no_slip_wall() const override { return true; }
    bool impermeable_wall() const override { return true; }

    Vec3 velocity(const Vec3& x, double) const override {
        const double r = norm(x);
        const Vec3 xh = x / r;
        const double A = 1.0 - 0.75 * a_ / r - 0.25 * a_ * a_ * a_ / (r * r * r);
        const double B = -0.75 * a_ / r + 0.75 * a_ * a_ * a_ / (r * r * r);
        return A * v_ + (B * dot(v_, xh)) * xh;
    }

    double pressure(const Vec3& x, double) const override {
        const double r = norm(x);
        return p_inf_ - 1.5 * nu_ * a_ * dot(v_, x) / (r * r * r);
    }

    Mat3 velocity_grad(const Vec3& x, double) const override {
        const double r = norm(x);
        const Vec3 xh = x / r;
        const double a3 = a_ * a_ * a_;
        const double B = -0.75 * a_ / r + 0.75 * a3 / (r * r * r);
        const double Ap = 0.75 * a_ / (r * r) + 0.75 * a3 / (r * r * r * r);
        const double Bp = 0.75 * a_ / (r * r) - 2.25 * a3 / (r * r * r * r);
        const double vxh = dot(v_, xh);
        Mat3 g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = Ap * xh[j] * v_[i] + Bp * vxh * xh[i] * xh[j] +
                           (B / r) * ((v_[j] - vxh * xh[j]) * xh[i] +
                                      vxh * ((i == j ? 1.0 : 0.0) - xh[i] * xh[j]));
                g.m[i][j] = s;
            }
        return g;
    }

    Vec3 pressure_grad(const Vec3& x, double) const override {
        const double r2 = norm2(x), r = std::sqrt(r2);
        const double r3 = r * r2, r5 = r3 * r2;
        return -1.5 * nu_ * a_ * (v_ / r3 - (3.0 * dot(v_, x) / r5) * x);
    }

    Vec3 velocity_laplacian(const Vec3& x, double t) const override {
        // Steady Stokes balance: nu lap u = grad p.
        return pressure_grad(x, t) / nu_;
    }

    Vec3 forcing(const Vec3& x, double t) const override {
        // Inertia left out of the Stokes system; field is solenoidal.
        return velocity_grad(x, t) * velocity(x, t);
    }

private:
    Vec3 v_;
    double a_, p_inf_;
};

/// Tangential slip velocity of an outer field transported along wall normals,
/// with finite-difference derivatives on the body scale. Stencils switch to
/// one-sided (away from the wall) when the wall is within reach.
class TransportedSlip {
public:
    TransportedSlip(const Body& body, const FlowField& outer, double fd_step)
        : body_(body), outer_(outer), h_(fd_step) {}

    Vec3 value(const Vec3& x) const {
        const Vec3 s = body_.project(x);
        const Vec3 n = body_.normal_at(s);
        const Vec3 u = outer_.velocity(s, 0.5 * outer_.horizon());
        return u - dot(u, n) * n;
    }

    Mat3 grad(const Vec3& x) const {
        const double d = body_.distance(x);
        const Vec3 n = body_.normal_at(body_.project(x));
        const Vec3 c = value(x);
        Mat3 g;
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            auto at = [&](double hh) { return value(x + hh * e); };
            Vec3 der;
            if (d >= 1.1 * h_) {
                const Vec3 d1 = (at(h_) - at(-h_)) / (2.0 * h_);
                const Vec3 d2 = (at(0.5 * h_) - at(-0.5 * h_)) / h_;
                der = (1.0 / 3.0) * (4.0 * d2 - d1);
            } else {
                const double sgn = dot(e, n) >= 0.0 ? 1.0 : -1.0;
                auto dd = [&](double hh) {
                    return (sgn / (2.0 * hh)) * (-3.0 * c + 4.0 * at(sgn * hh) -
                                                 at(2.0 * sgn * hh));
                };
                const Vec3 d1 = dd(h_), d2 = dd(0.5 * h_);
                der = (1.0 / 3.0) * (4.0 * d2 - d1);
            }
            for (int i = 0; i < 3; ++i) g.m[i][j] = der[i];
        }
        return g;
    }

    Vec3 laplacian(const Vec3& x) const {
        const double d = body_.distance(x);
        const Vec3 n = body_.normal_at(body_.project(x));
        const Vec3 c = value(x);
        Vec3 lap{};
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            auto at = [&](double hh) { return value(x + hh * e); };
            if (d >= 1.1 * h_) {
                auto second = [&](double hh) {
                    return (at(hh) + at(-hh) - 2.0 * c) / (hh * hh);
                };
                const Vec3 d1 = second(h_), d2 = second(0.5 * h_);
                lap += (1.0 / 15.0) * (16.0 * d2 - d1);
            } else {
                const double sgn = dot(e, n) >= 0.0 ? 1.0 : -1.0;
                auto dd = [&](double hh) {
                    return (2.0 * c - 5.0 * at(sgn * hh) + 4.0 * at(2.0 * sgn * hh) -
                            at(3.0 * sgn * hh)) /
                           (hh * hh);
                };
                const Vec3 d1 = dd(h_), d2 = dd(0.5 * h_);
                lap += (1.0 / 3.0) * (4.0 * d2 - d1);
            }
        }
        return lap;
    }

private:
    const Body& body_;
    const FlowField& outer_;
    double h_;
};

/// Outer potential flow with a smooth near-wall damping of the tangential
/// velocity at thickness delta(nu) = delta0 * nu^alpha. Satisfies the stick
/// condition exactly; u.n equals the outer flow unless a wall-normal
/// perturbation or divergence correction is requested.
class BoundaryLayerField final : public FlowField {
public:
    BoundaryLayerField(std::shared_ptr<const Body> body, const Vec3& v, double a, double nu,
                       const BoundaryLayerOptions& opt, double horizon)
        : body_(std::move(body)),
          outer_(v, a, 0.0, horizon),
          opt_(opt),
          slip_(*body_, outer_, 2.5e-3 * a) {
        nu_ = nu;
        horizon_ = horizon;
        delta_ = opt.delta0 * std::pow(nu, opt.delta_exponent);
        if (delta_ <= 0.0 || delta_ >= body_->tubular_radius())
            throw DomainError("boundary layer thickness outside tubular neighborhood");
    }

    std::string id() const override { return "boundary_layer"; }
    ResidualClass residual_class() const override { return ResidualClass::Forced; }
    bool no_slip_wall() const override { return true; }
    bool impermeable_wall() const override { return true; }
    std::vector<double> radial_breakpoints() const override { return {delta_}; }

    double layer_thickness() const { return delta_; }

    Vec3 velocity(const Vec3& x, double t) const override {
        Vec3 u = outer_.velocity(x, t);
        const double d = body_->distance(x);
        if (d >= delta_) return u;
        const double s = d / delta_;
        u -= cutoff_exp(s) * slip_.value(x);
        if (opt_.normal_perturbation != 0.0) {
            const Vec3 n = body_->normal_at(body_->project(x));
            u += opt_.normal_perturbation * pshape(s) * n;
        }
        if (opt_.divergence_correction) {
            const Vec3 n = body_->normal_at(body_->project(x));
            u += corrector(x, d) * n;
        }
        return u;
    }

    double pressure(const Vec3& x, double t) const override { return outer_.pressure(x, t); }

    Mat3 velocity_grad(const Vec3& x, double t) const override {
        Mat3 g = outer_.velocity_grad(x, t);
        const double d = body_->distance(x);
        if (d >= delta_) return g;
        const double s = d / delta_;
        const Vec3 n = body_->normal_at(body_->project(x));
        const Vec3 w = slip_.value(x);
        const Mat3 gw = slip_.grad(x);
        const double chi = cutoff_exp(s), chip = cutoff_exp_deriv(s) / delta_;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g.m[i][j] -= chip * n[j] * w[i] + chi * gw.m[i][j];
        if (opt_.normal_perturbation != 0.0) {
            const Mat3 hess = body_->distance_hessian(x);
            const double pp = pshape_deriv(s) / delta_, pv = pshape(s);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    g.m[i][j] += opt_.normal_perturbation * (pp * n[j] * n[i] + pv * hess.m[i][j]);
        }
        if (opt_.divergence_correction) {
            // Correction varies on the layer scale; step limited accordingly,
            // one-sided against the wall.
            const double h = std::max(1e-6, std::min(2.5e-3, 0.02 * delta_));
            auto cn = [&](const Vec3& xp) {
                const double dp = body_->distance(xp);
                if (dp >= delta_) return Vec3{};
                return corrector(xp, dp) * body_->normal_at(body_->project(xp));
            };
            const Vec3 c0 = cn(x);
            for (int j = 0; j < 3; ++j) {
                Vec3 e{0, 0, 0};
                e[j] = 1.0;
                if (d >= 1.1 * h) {
                    const Vec3 p1 = cn(x + h * e), m1 = cn(x - h * e);
                    for (int i = 0; i < 3; ++i) g.m[i][j] += (p1[i] - m1[i]) / (2.0 * h);
                } else {
                    const double sgn = dot(e, n) >= 0.0 ? 1.0 : -1.0;
                    const Vec3 p1 = cn(x + sgn * h * e), p2 = cn(x + 2.0 * sgn * h * e);
                    for (int i = 0; i < 3; ++i)
                        g.m[i][j] += sgn * (-3.0 * c0[i] + 4.0 * p1[i] - p2[i]) / (2.0 * h);
                }
            }
        }
        return g;
    }

    Vec3 velocity_laplacian(const Vec3& x, double t) const override {
        Vec3 lap = outer_.velocity_laplacian(x, t);
        const double d = body_->distance(x);
        if (d >= delta_) return lap;
        const double s = d / delta_;
        const Vec3 n = body_->normal_at(body_->project(x));
        const Vec3 w = slip_.value(x);
        const Mat3 gw = slip_.grad(x);
        const Vec3 lw = slip_.laplacian(x);
        const double lapd = body_->laplacian_distance(x);
        const double chi = cutoff_exp(s);
        const double chip = cutoff_exp_deriv(s) / delta_;
        const double chipp = cutoff_exp_deriv2(s) / (delta_ * delta_);
        const Vec3 ndotgw = gw * n;  // (n . grad) w
        lap -= chipp * w + chip * (lapd * w + 2.0 * ndotgw) + chi * lw;
        if (opt_.normal_perturbation != 0.0) {
            // lap(P n) = P'' n + P' (lap d) n + P lap n; (n.grad)n = 0.
            const double pv = pshape(s), pp = pshape_deriv(s) / delta_,
                         ppp = pshape_deriv2(s) / (delta_ * delta_);
            const Vec3 lapn = laplacian_normal(x);
            lap += opt_.normal_perturbation * ((ppp + pp * lapd) * n + pv * lapn);
        }
        if (opt_.divergence_correction)
            throw DomainError("laplacian with divergence correction not supported");
        return lap;
    }

    Vec3 pressure_grad(const Vec3& x, double t) const override {
        return outer_.pressure_grad(x, t);
    }

private:
    static double pshape(double s) { return 4.0 * s * cutoff_exp(s); }
    static double pshape_deriv(double s) {
        return 4.0 * (cutoff_exp(s) + s * cutoff_exp_deriv(s));
    }
    static double pshape_deriv2(double s) {
        return 4.0 * (2.0 * cutoff_exp_deriv(s) + s * cutoff_exp_deriv2(s));
    }

    Vec3 laplacian_normal(const Vec3& x) const {
        // lap of the transported normal field; smooth on the body scale, with
        // one-sided stencils against the wall.
        const double h = 2.5e-3;
        const double d = body_->distance(x);
        const Vec3 c = body_->normal_at(body_->project(x));
        Vec3 lap{};
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            auto at = [&](double hh) { return body_->normal_at(body_->project(x + hh * e)); };
            if (d >= 1.1 * h) {
                lap += (at(h) + at(-h) - 2.0 * c) / (h * h);
            } else {
                const double sgn = dot(e, c) >= 0.0 ? 1.0 : -1.0;
                lap += (2.0 * c - 5.0 * at(sgn * h) + 4.0 * at(2.0 * sgn * h) -
                        at(3.0 * sgn * h)) /
                       (h * h);
            }
        }
        return lap;
    }

    double corrector(const Vec3& x, double d) const {
        // Integral of the layer divergence along the normal, so that the
        // leading divergence of the damped slip cancels; O(delta) by size.
        const Vec3 foot = body_->project(x);
        const Vec3 n = body_->normal_at(foot);
        const GaussRule& gr = gauss_legendre(8);
        double acc = 0.0;
        for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
            const double s = 0.5 * d * (1.0 + gr.nodes[q]);
            const Vec3 xs = foot + s * n;
            acc += 0.5 * d * gr.weights[q] * cutoff_exp(s / delta_) * trace(slip_.grad(xs));
        }
        return acc;
    }

    std::shared_ptr<const Body> body_;
    PotentialSphereField outer_;
    BoundaryLayerOptions opt_;
    TransportedSlip slip_;
    double delta_;
};

/// Solenoidal polynomial field with polynomial pressure; closed-form forcing
/// for derivative oracles.
class PolynomialField final : public FlowField {
public:
    PolynomialField(double s, double ps, double nu, double horizon) : s_(s), ps_(ps) {
        nu_ = nu;
        horizon_ = horizon;
    }
    std::string id() const override { return "polynomial"; }

    Vec3 velocity(const Vec3& x, double) const override {
        return {s_ * x.y * x.y, s_ * x.z * x.z, s_ * x.x * x.x};
    }
    double pressure(const Vec3& x, double) const override { return ps_ * x.x * x.y * x.z; }
    Mat3 velocity_grad(const Vec3& x, double) const override {
        Mat3 g;
        g.m[0][1] = 2.0 * s_ * x.y;
        g.m[1][2] = 2.0 * s_ * x.z;
        g.m[2][0] = 2.0 * s_ * x.x;
        return g;
    }
    Vec3 velocity_laplacian(const Vec3&, double) const override {
        return {2.0 * s_, 2.0 * s_, 2.0 * s_};
    }
    Vec3 pressure_grad(const Vec3& x, double) const override {
        return {ps_ * x.y * x.z, ps_ * x.x * x.z, ps_ * x.x * x.y};
    }

private:
    double s_, ps_;
};

class TimeModulatedField final : public FlowField {
public:
    TimeModulatedField(std::shared_ptr<const FlowField> base, double amplitude)
        : base_(std::move(base)), amp_(amplitude) {
        nu_ = base_->viscosity();
        horizon_ = base_->horizon();
    }
    std::string id() const override { return base_->id() + "+time_modulated"; }
    bool steady() const override { return false; }
    bool no_slip_wall() const override { return base_->no_slip_wall(); }
    bool impermeable_wall() const override { return base_->impermeable_wall(); }
    std::vector<double> radial_breakpoints() const override {
        return base_->radial_breakpoints();
    }

    double gamma(double t) const { return 1.0 + amp_ * std::sin(2.0 * M_PI * t / horizon_); }
    double gamma_dt(double t) const {
        return amp_ * (2.0 * M_PI / horizon_) * std::cos(2.0 * M_PI * t / horizon_);
    }

    Vec3 velocity(const Vec3& x, double t) const override {
        return gamma(t) * base_->velocity(x, t);
    }
    double pressure(const Vec3& x, double t) const override {
        return gamma(t) * base_->pressure(x, t);
    }
    Mat3 velocity_grad(const Vec3& x, double t) const override {
        return gamma(t) * base_->velocity_grad(x, t);
    }
    Vec3 velocity_laplacian(const Vec3& x, double t) const override {
        return gamma(t) * base_->velocity_laplacian(x, t);
    }
    Vec3 pressure_grad(const Vec3& x, double t) const override {
        return gamma(t) * base_->pressure_grad(x, t);
    }
    Vec3 velocity_dt(const Vec3& x, double t) const override {
        return gamma_dt(t) * base_->velocity(x, t);
    }

private:
    std::shared_ptr<const FlowField> base_;
    double amp_;
};

}  // namespace

std::shared_ptr<FlowField> make_zero_field(double p_const, double horizon) {
    return std::make_shared<ZeroField>(p_const, horizon);
}
std::shared_ptr<FlowField> make_free_stream(const Vec3& v, double p_const, double horizon) {
    return std::make_shared<FreeStreamField>(v, p_const, horizon);
}
std::shared_ptr<FlowField> make_potential_sphere(const Vec3& free_stream, double radius,
                                                 double p_inf, double horizon) {
    return std::make_shared<PotentialSphereField>(free_stream, radius, p_inf, horizon);
}
std::shared_ptr<FlowField> make_stokes_sphere(const Vec3& free_stream, double radius, double nu,
                                              double p_inf, double horizon) {
    if (nu <= 0.0) throw DomainError("stokes field requires nu > 0");
    return std::make_shared<StokesSphereField>(free_stream, radius, nu, p_inf, horizon);
}
std::shared_ptr<FlowField> make_boundary_layer(std::shared_ptr<const Body> body,
                                               const Vec3& free_stream, double radius, double nu,
                                               const BoundaryLayerOptions& opt, double horizon) {
    if (nu <= 0.0) throw DomainError("boundary layer family requires nu > 0");
    return std::make_shared<BoundaryLayerField>(std::move(body), free_stream, radius, nu, opt,
                                                horizon);
}
std::shared_ptr<FlowField> make_polynomial_field(double scale, double pressure_scale, double nu,
                                                 double horizon) {
    return std::make_shared<PolynomialField>(scale, pressure_scale, nu, horizon);
}
std::shared_ptr<FlowField> make_time_modulated(std::shared_ptr<const FlowField> base,
                                               double amplitude) {
    return std::make_shared<TimeModulatedField>(std::move(base), amplitude);
}

}  // namespace wallflux
