#include "wallflux/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wallflux {

namespace {

// Newton iteration on Legendre polynomials, nodes seeded by the Chebyshev-like
// asymptotic estimate. Symmetric pairs are assigned from one half.
GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

GaussRule gauss_weighted(const std::function<double(double)>& weight, double a, double b,
                         int n) {
    if (n < 1) throw std::invalid_argument("gauss_weighted: order must be >= 1");
    // Dense reference rule for the Stieltjes inner products.
    const GaussRule& gl = gauss_legendre(32);
    const int panels = 64;
    std::vector<double> xs, ws;
    xs.reserve(panels * gl.nodes.size());
    ws.reserve(xs.capacity());
    for (int p = 0; p < panels; ++p) {
        const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double x = mid + half * gl.nodes[i];
            xs.push_back(x);
            ws.push_back(half * gl.weights[i] * weight(x));
        }
    }
    const std::size_t m = xs.size();

    // Orthonormal three-term recurrence via discretized inner products.
    std::vector<double> alpha(n), beta(n + 1, 0.0);
    std::vector<double> pk(m), pkm1(m, 0.0);
    double mu0 = 0.0;
    for (std::size_t j = 0; j < m; ++j) mu0 += ws[j];
    if (!(mu0 > 0.0)) throw std::invalid_argument("gauss_weighted: weight has no mass");
    beta[0] = std::sqrt(mu0);
    for (std::size_t j = 0; j < m; ++j) pk[j] = 1.0 / beta[0];
    for (int k = 0; k < n; ++k) {
        double ak = 0.0;
        for (std::size_t j = 0; j < m; ++j) ak += ws[j] * xs[j] * pk[j] * pk[j];
        alpha[k] = ak;
        if (k + 1 <= n) {
            std::vector<double> r(m);
            double nrm2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                r[j] = (xs[j] - ak) * pk[j] - beta[k] * (k > 0 ? pkm1[j] : 0.0);
                nrm2 += ws[j] * r[j] * r[j];
            }
            beta[k + 1] = std::sqrt(std::max(nrm2, 0.0));
            if (beta[k + 1] < 1e-140) throw std::invalid_argument("gauss_weighted: breakdown");
            pkm1 = pk;
            for (std::size_t j = 0; j < m; ++j) pk[j] = r[j] / beta[k + 1];
        }
    }

    // Sturm-count bisection for the eigenvalues of the Jacobi matrix.
    auto count_below = [&](double lam) {
        int cnt = 0;
        double d = alpha[0] - lam;
        if (d < 0.0) ++cnt;
        for (int k = 1; k < n; ++k) {
            const double off = beta[k];
            d = alpha[k] - lam - off * off / (std::fabs(d) < 1e-300 ? 1e-300 : d);
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double lo = a, hi = b;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (count_below(mid) <= i ? lo : hi) = mid;
            if (hi - lo < 1e-16 * (std::fabs(hi) + 1.0)) break;
        }
        const double x = 0.5 * (lo + hi);
        rule.nodes[i] = x;
        // Gauss weight from the orthonormal-polynomial sum.
        double pm1 = 0.0, p0 = 1.0 / beta[0], sum = p0 * p0;
        for (int k = 0; k + 1 < n; ++k) {
            const double p1 = ((x - alpha[k]) * p0 - beta[k] * pm1) / beta[k + 1];
            sum += p1 * p1;
            pm1 = p0;
            p0 = p1;
        }
        rule.weights[i] = 1.0 / sum;
    }
    return rule;
}

}  // namespace wallflux
