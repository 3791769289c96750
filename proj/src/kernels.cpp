#include "wallflux/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace wallflux {
namespace kernels {

namespace detail {

double weighted_sum_scalar(const double* w, const double* v, std::size_t n) {
    // Four independent accumulators; fixed order, matches the lane structure
    // of the vector variant up to rounding.
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += w[i] * v[i];
        a1 += w[i + 1] * v[i + 1];
        a2 += w[i + 2] * v[i + 2];
        a3 += w[i + 3] * v[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * v[i];
    return ((a0 + a2) + (a1 + a3)) + tail;
}

void moment_sums_scalar(const double* w, const double* u1, const double* u2, const double* u3,
                        const double* p, std::size_t n, double out[10]) {
    double s[10] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w[i];
        const double a = u1[i], b = u2[i], c = u3[i];
        s[0] += wi * a;
        s[1] += wi * b;
        s[2] += wi * c;
        s[3] += wi * a * a;
        s[4] += wi * b * b;
        s[5] += wi * c * c;
        s[6] += wi * a * b;
        s[7] += wi * a * c;
        s[8] += wi * b * c;
        s[9] += wi * p[i];
    }
    for (int k = 0; k < 10; ++k) out[k] = s[k];
}

}  // namespace detail

namespace {

Backend g_backend = Backend::Scalar;
bool g_initialized = false;

Backend detect() {
    if (const char* env = std::getenv("WALLFLUX_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && avx2_available()) return Backend::Avx2;
        if (v == "avx2") throw std::runtime_error("WALLFLUX_SIMD=avx2 requested but AVX2 unavailable");
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

void ensure_init() {
    if (!g_initialized) {
        g_backend = detect();
        g_initialized = true;
    }
}

}  // namespace

Backend active_backend() {
    ensure_init();
    return g_backend;
}

std::string backend_name() { return active_backend() == Backend::Avx2 ? "avx2" : "scalar"; }

void set_backend(const std::string& name) {
    if (name == "scalar") {
        g_backend = Backend::Scalar;
        g_initialized = true;
    } else if (name == "avx2") {
        if (!avx2_available()) throw std::runtime_error("AVX2 backend unavailable on this CPU");
        g_backend = Backend::Avx2;
        g_initialized = true;
    } else if (name == "auto") {
        g_backend = detect();
        g_initialized = true;
    } else {
        throw std::runtime_error("unknown kernel backend: " + name);
    }
}

double weighted_sum(const double* w, const double* v, std::size_t n) {
    ensure_init();
    if (g_backend == Backend::Avx2) return detail::weighted_sum_avx2(w, v, n);
    return detail::weighted_sum_scalar(w, v, n);
}

void moment_sums(const double* w, const double* u1, const double* u2, const double* u3,
                 const double* p, std::size_t n, double out[10]) {
    ensure_init();
    if (g_backend == Backend::Avx2) return detail::moment_sums_avx2(w, u1, u2, u3, p, n, out);
    return detail::moment_sums_scalar(w, u1, u2, u3, p, n, out);
}

}  // namespace kernels
}  // namespace wallflux
