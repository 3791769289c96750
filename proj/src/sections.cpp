#include "wallflux/sections.hpp"

#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/profiles.hpp"

namespace wallflux {

// ---------------------------------------------------------------------------
// Time bump
// ---------------------------------------------------------------------------

double TimeBump::value(double t) const {
    const double s = (t - t0) / (t1 - t0);
    return bump01(s) / bump01(0.5);
}

double TimeBump::deriv(double t) const {
    const double s = (t - t0) / (t1 - t0);
    return bump01_deriv(s) / (bump01(0.5) * (t1 - t0));
}

double TimeBump::integral() const { return (t1 - t0) * bump01_integral() / bump01(0.5); }

// ---------------------------------------------------------------------------
// Ambient recipes and sections
// ---------------------------------------------------------------------------

Vec3 AmbientField::eval(const Vec3& x) const {
    switch (kind) {
        case Kind::Constant: return vec;
        case Kind::Rotation: return cross(vec, x);
        case Kind::AxialSwirl: return dot(vec, x) * cross(vec, x);
        case Kind::Stretch: return dot(vec, x) * vec;
        case Kind::Meridional: return dot(vec, x) * (x - dot(vec, x) * vec);
        case Kind::Affine: return mat * x + shift;
    }
    return {};
}

Vec3 SurfaceSection::spatial(const Vec3& s) const {
    const Vec3 n = body->normal_at(s);
    if (kind == Kind::Tangential) {
        const Vec3 a = ambient.eval(s);
        return a - dot(a, n) * n;
    }
    return normal_scalar(s) * n;
}

double SurfaceSection::normal_scalar(const Vec3& s) const {
    if (kind != Kind::Normal) throw DomainError("normal_scalar on tangential section");
    switch (profile.kind) {
        case NormalProfile::Kind::Constant: return profile.c0;
        case NormalProfile::Kind::Component: return dot(profile.vec, body->normal_at(s));
        case NormalProfile::Kind::ComponentSquared: {
            const double c = dot(profile.vec, body->normal_at(s));
            return c * c;
        }
        case NormalProfile::Kind::Companion: break;
    }
    // Surface-curl scalar of the companion tangential section.
    const SurfaceSection& psi = *profile.companion_of;
    const Vec3 n = body->normal_at(s);
    Vec3 t1 = std::fabs(n.x) < 0.9 ? cross(n, Vec3{1, 0, 0}) : cross(n, Vec3{0, 1, 0});
    t1 = normalized(t1);
    const Vec3 t2 = cross(n, t1);
    const double h = 1e-3;
    auto dderiv = [&](const Vec3& dir) {
        auto at = [&](double hh) { return psi.spatial(body->project(s + hh * dir)); };
        const Vec3 d1 = (at(h) - at(-h)) / (2.0 * h);
        const Vec3 d2 = (at(0.5 * h) - at(-0.5 * h)) / h;
        return (1.0 / 3.0) * (4.0 * d2 - d1);
    };
    return dot(t2, dderiv(t1)) - dot(t1, dderiv(t2));
}

double SurfaceSection::seminorm(const SurfaceQuadrature& sq, int order) const {
    double sup = 0.0;
    const double h = 1e-3;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const Vec3 s = sq.nodes[i];
        const Vec3 n = sq.normals[i];
        sup = std::max(sup, norm(spatial(s)));
        if (order < 1) continue;
        Vec3 t1 = std::fabs(n.x) < 0.9 ? cross(n, Vec3{1, 0, 0}) : cross(n, Vec3{0, 1, 0});
        t1 = normalized(t1);
        const Vec3 t2 = cross(n, t1);
        for (const Vec3& dir : {t1, t2}) {
            auto at = [&](double hh) { return spatial(body->project(s + hh * dir)); };
            sup = std::max(sup, norm((at(h) - at(-h)) / (2.0 * h)));
            if (order >= 2)
                sup = std::max(sup, norm((at(h) + at(-h) - 2.0 * at(0.0)) / (h * h)));
        }
    }
    return sup;
}

SurfaceSection SurfaceSection::tangential(std::string id, std::shared_ptr<const Body> body,
                                          const AmbientField& ambient, const TimeBump& bump) {
    SurfaceSection s;
    s.kind = Kind::Tangential;
    s.id = std::move(id);
    s.body = std::move(body);
    s.ambient = ambient;
    s.bump = bump;
    return s;
}

SurfaceSection SurfaceSection::normal(std::string id, std::shared_ptr<const Body> body,
                                      const NormalProfile& profile, const TimeBump& bump) {
    SurfaceSection s;
    s.kind = Kind::Normal;
    s.id = std::move(id);
    s.body = std::move(body);
    s.profile = profile;
    s.bump = bump;
    return s;
}

SurfaceSection lighthill_companion_section(const std::shared_ptr<const SurfaceSection>& psi) {
    if (psi->kind != SurfaceSection::Kind::Tangential)
        throw DomainError("companion section requires a tangential source");
    SurfaceSection s;
    s.kind = SurfaceSection::Kind::Normal;
    s.id = psi->id + "+companion";
    s.body = psi->body;
    s.profile.kind = NormalProfile::Kind::Companion;
    s.profile.companion_of = psi;
    s.bump = psi->bump;
    return s;
}

// ---------------------------------------------------------------------------
// Extensions
// ---------------------------------------------------------------------------

ExtendedTestField::ExtendedTestField(std::shared_ptr<const Body> body,
                                     std::shared_ptr<const SurfaceSection> section,
                                     double epsilon, double drift_coeff, const Vec3& drift_dir)
    : body_(std::move(body)),
      section_(std::move(section)),
      eps_(epsilon),
      drift_c_(drift_coeff),
      drift_m_(drift_dir) {
    eta1_ = 1e-4 * eps_;
    eta2_ = 5e-3 * eps_;
    if (eps_ <= 0.0 || eps_ + 4.0 * eta2_ >= body_->tubular_radius())
        throw DomainError("extension support exceeds tubular neighborhood");
}

Vec3 ExtendedTestField::smooth_factor(const Vec3& x) const {
    const Vec3 foot = body_->project(x);
    Vec3 q = section_->spatial(foot);
    if (drift_c_ != 0.0) {
        const double d = norm(x - foot);
        q += (drift_c_ * d / eps_) * dot(q, drift_m_) * body_->normal_at(foot);
    }
    return q;
}

Vec3 ExtendedTestField::value(const Vec3& x, double t) const {
    return section_->bump.value(t) * value_spatial(x);
}

Vec3 ExtendedTestField::value_spatial(const Vec3& x) const {
    const double d = body_->distance(x);
    if (d >= eps_) return {};
    return cutoff_exp(d / eps_) * smooth_factor(x);
}

ExtendedTestField::SpatialBundle ExtendedTestField::spatial(const Vec3& x) const {
    SpatialBundle out;
    const double d = body_->distance(x);
    if (d >= eps_) return out;

    const double w = cutoff_exp(d / eps_);
    const double wp = cutoff_exp_deriv(d / eps_) / eps_;
    const double wpp = cutoff_exp_deriv2(d / eps_) / (eps_ * eps_);
    const Vec3 foot = body_->project(x);
    const Vec3 n = body_->normal_at(foot);
    const double lapd = body_->laplacian_distance(x);
    const Vec3 q0 = smooth_factor(x);

    // Finite differences of the smooth transported factor; the radial weight
    // is handled analytically. One-sided stencils when the wall is within
    // stencil reach.
    Mat3 gq;
    Vec3 lapq{};
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        const double toward = dot(e, n);
        auto at = [&](double hh) { return smooth_factor(x + hh * e); };

        if (d >= 1.1 * eta1_) {
            const Vec3 d1 = (at(eta1_) - at(-eta1_)) / (2.0 * eta1_);
            const Vec3 d2 = (at(0.5 * eta1_) - at(-0.5 * eta1_)) / eta1_;
            for (int i = 0; i < 3; ++i) gq.m[i][j] = (4.0 * d2[i] - d1[i]) / 3.0;
        } else {
            const double sgn = toward >= 0.0 ? 1.0 : -1.0;
            auto dd = [&](double hh) {
                return (sgn / (2.0 * hh)) * (-3.0 * q0 + 4.0 * at(sgn * hh) - at(2.0 * sgn * hh));
            };
            const Vec3 d1 = dd(eta1_), d2 = dd(0.5 * eta1_);
            for (int i = 0; i < 3; ++i) gq.m[i][j] = (4.0 * d2[i] - d1[i]) / 3.0;
        }

        if (d >= 1.1 * eta2_) {
            auto dd = [&](double hh) { return (at(hh) + at(-hh) - 2.0 * q0) / (hh * hh); };
            const Vec3 d1 = dd(eta2_), d2 = dd(0.5 * eta2_);
            lapq += (1.0 / 15.0) * (16.0 * d2 - d1);
        } else {
            const double sgn = toward >= 0.0 ? 1.0 : -1.0;
            auto dd = [&](double hh) {
                return (2.0 * q0 - 5.0 * at(sgn * hh) + 4.0 * at(2.0 * sgn * hh) -
                        at(3.0 * sgn * hh)) /
                       (hh * hh);
            };
            const Vec3 d1 = dd(eta2_), d2 = dd(0.5 * eta2_);
            lapq += (1.0 / 3.0) * (4.0 * d2 - d1);
        }
    }

    out.value = w * q0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.grad.m[i][j] = wp * n[j] * q0[i] + w * gq.m[i][j];
    out.divergence = wp * dot(n, q0) + w * trace(gq);
    const Vec3 curlq{gq.m[2][1] - gq.m[1][2], gq.m[0][2] - gq.m[2][0], gq.m[1][0] - gq.m[0][1]};
    out.curl = wp * cross(n, q0) + w * curlq;
    out.laplacian = wpp * q0 + wp * (lapd * q0 + 2.0 * (gq * n)) + w * lapq;
    return out;
}

ExtendedTestField::Derivs ExtendedTestField::derivatives(const Vec3& x, double t) const {
    const SpatialBundle sb = spatial(x);
    const double b = section_->bump.value(t);
    const double bp = section_->bump.deriv(t);
    Derivs d;
    d.value = b * sb.value;
    d.dt = bp * sb.value;
    d.grad = b * sb.grad;
    d.laplacian = b * sb.laplacian;
    d.curl = b * sb.curl;
    d.divergence = b * sb.divergence;
    return d;
}

ExtendedTestField extend_tangential(std::shared_ptr<const Body> body,
                                    std::shared_ptr<const SurfaceSection> psi, double epsilon) {
    if (psi->kind != SurfaceSection::Kind::Tangential)
        throw DomainError("extend_tangential requires a tangential section");
    return ExtendedTestField(std::move(body), std::move(psi), epsilon);
}

ExtendedTestField extend_normal(std::shared_ptr<const Body> body,
                                std::shared_ptr<const SurfaceSection> psi, double epsilon) {
    if (psi->kind != SurfaceSection::Kind::Normal)
        throw DomainError("extend_normal requires a normal section");
    return ExtendedTestField(std::move(body), std::move(psi), epsilon);
}

ExtendedTestField extend_tangential_drift(std::shared_ptr<const Body> body,
                                          std::shared_ptr<const SurfaceSection> psi,
                                          double epsilon, double drift_coeff,
                                          const Vec3& drift_dir) {
    if (psi->kind != SurfaceSection::Kind::Tangential)
        throw DomainError("extend_tangential_drift requires a tangential section");
    return ExtendedTestField(std::move(body), std::move(psi), epsilon, drift_coeff, drift_dir);
}

}  // namespace wallflux
