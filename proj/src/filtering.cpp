#include "wallflux/filtering.hpp"

#include <cmath>

#include "wallflux/error.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/profiles.hpp"
#include "wallflux/quadrature.hpp"

#include <map>
#include <mutex>

namespace wallflux {

MollifierKernel::MollifierKernel(int radial_order, int sphere_order)
    : radial_order_(radial_order), sphere_order_(sphere_order) {
    if (radial_order < 2 || sphere_order < 2) throw DomainError("mollifier orders must be >= 2");
    // Radial rule built against the kernel weight r^2 G(r): the kernel mass is
    // integrated exactly and smooth integrands converge spectrally.
    static std::map<int, GaussRule> radial_cache;
    static std::mutex radial_mtx;
    GaussRule gr;
    {
        std::lock_guard<std::mutex> lock(radial_mtx);
        auto it = radial_cache.find(radial_order);
        if (it == radial_cache.end())
            it = radial_cache
                     .emplace(radial_order,
                              gauss_weighted(
                                  [](double r) { return mollifier_radial(r) * r * r; }, 0.0,
                                  1.0, radial_order))
                     .first;
        gr = it->second;
    }
    const GaussRule& gmu = gauss_legendre(sphere_order);
    const int nphi = 2 * sphere_order;
    const double dphi = 2.0 * M_PI / nphi;
    offsets_.reserve(radial_order * sphere_order * nphi);
    weights_.reserve(offsets_.capacity());
    for (int q = 0; q < radial_order; ++q) {
        const double r = gr.nodes[q];
        const double wr = gr.weights[q];
        for (int i = 0; i < sphere_order; ++i) {
            const double mu = gmu.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int j = 0; j < nphi; ++j) {
                const double phi = dphi * (j + 0.5);
                offsets_.push_back({r * st * std::cos(phi), r * st * std::sin(phi), r * mu});
                weights_.push_back(wr * gmu.weights[i] * dphi);
            }
        }
    }
}

double MollifierKernel::mass() const {
    std::vector<double> ones(weights_.size(), 1.0);
    return kernels::weighted_sum(weights_.data(), ones.data(), weights_.size());
}

MollifierKernel MollifierKernel::refined() const {
    return MollifierKernel(radial_order_ + radial_order_ / 2, sphere_order_ + sphere_order_ / 2);
}

FilteredState mollify_state_unchecked(const MollifierKernel& kernel, double l,
                                      const FlowField& field, const Vec3& x, double t) {
    const auto& off = kernel.offsets();
    const auto& w = kernel.weights();
    const std::size_t n = off.size();
    // Sample into SoA scratch, then reduce with the fused moment kernel.
    static thread_local std::vector<double> u1, u2, u3, pp;
    u1.resize(n);
    u2.resize(n);
    u3.resize(n);
    pp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 xi = x + l * off[i];
        const Vec3 u = field.velocity(xi, t);
        u1[i] = u.x;
        u2[i] = u.y;
        u3[i] = u.z;
        pp[i] = field.pressure(xi, t);
    }
    double m[10];
    kernels::moment_sums(w.data(), u1.data(), u2.data(), u3.data(), pp.data(), n, m);
    FilteredState out;
    out.u = {m[0], m[1], m[2]};
    out.stress.m[0][0] = m[3];
    out.stress.m[1][1] = m[4];
    out.stress.m[2][2] = m[5];
    out.stress.m[0][1] = out.stress.m[1][0] = m[6];
    out.stress.m[0][2] = out.stress.m[2][0] = m[7];
    out.stress.m[1][2] = out.stress.m[2][1] = m[8];
    out.p = m[9];
    return out;
}

FilteredState mollify_state(const MollifierKernel& kernel, double l, const FlowField& field,
                            const Body& body, const Vec3& x, double t) {
    if (l <= 0.0) throw DomainError("filter scale must be positive");
    if (body.distance(x) < l) throw DomainError("mollification stencil exits domain");
    return mollify_state_unchecked(kernel, l, field, x, t);
}

Vec3 mollify_vector(const MollifierKernel& kernel, double l,
                    const std::function<Vec3(const Vec3&)>& f, const Vec3& x) {
    Vec3 acc{};
    const auto& off = kernel.offsets();
    const auto& w = kernel.weights();
    for (std::size_t i = 0; i < off.size(); ++i) acc += w[i] * f(x + l * off[i]);
    return acc;
}

Mat3 advective_stress(const MollifierKernel& kernel, double l, const FlowField& field,
                      const Body& body, const Vec3& x, double t) {
    return mollify_state(kernel, l, field, body, x, t).stress;
}

Vec3 filtered_stress_divergence_fd(const MollifierKernel& kernel, double l,
                                   const FlowField& field, const Vec3& x, double t,
                                   double fd_step) {
    Vec3 div{};
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1.0;
        const Mat3 tp = mollify_state_unchecked(kernel, l, field, x + fd_step * e, t).stress;
        const Mat3 tm = mollify_state_unchecked(kernel, l, field, x - fd_step * e, t).stress;
        for (int i = 0; i < 3; ++i) div[i] += (tp.m[i][j] - tm.m[i][j]) / (2.0 * fd_step);
    }
    return div;
}

Vec3 filtered_stress_divergence_direct(const MollifierKernel& kernel, double l,
                                       const FlowField& field, const Vec3& x, double t) {
    return mollify_vector(
        kernel, l,
        [&](const Vec3& y) {
            const Mat3 g = field.velocity_grad(y, t);
            return g * field.velocity(y, t) + trace(g) * field.velocity(y, t);
        },
        x);
}

double WindowProfile::value(double s) const { return smoothstep((s - h) / l); }

double WindowProfile::deriv(double s) const { return smoothstep_deriv((s - h) / l) / l; }

double WindowProfile::deriv_sup_constant() { return smoothstep_deriv_sup(); }

double window_value(const WindowProfile& profile, const Body& body, const Vec3& x) {
    return profile.value(body.distance(x));
}

Vec3 window_gradient(const WindowProfile& profile, const Body& body, const Vec3& x) {
    const double d = body.distance(x);
    if (d <= profile.h || d >= profile.h + profile.l) return {};
    const Vec3 s = body.project(x);
    return profile.deriv(d) * body.normal_at(s);
}

}  // namespace wallflux
