#include "wallflux/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define WALLFLUX_X86 1
#include <immintrin.h>
#endif

namespace wallflux {
namespace kernels {

bool avx2_available() {
#if defined(WALLFLUX_X86) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace detail {

#if defined(WALLFLUX_X86) && defined(__GNUC__)

__attribute__((target("avx2,fma"))) double weighted_sum_avx2(const double* w, const double* v,
                                                             std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wv = _mm256_loadu_pd(w + i);
        const __m256d vv = _mm256_loadu_pd(v + i);
        acc = _mm256_fmadd_pd(wv, vv, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * v[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

__attribute__((target("avx2,fma"))) void moment_sums_avx2(const double* w, const double* u1,
                                                          const double* u2, const double* u3,
                                                          const double* p, std::size_t n,
                                                          double out[10]) {
    __m256d s[10];
    for (int k = 0; k < 10; ++k) s[k] = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wi = _mm256_loadu_pd(w + i);
        const __m256d a = _mm256_loadu_pd(u1 + i);
        const __m256d b = _mm256_loadu_pd(u2 + i);
        const __m256d c = _mm256_loadu_pd(u3 + i);
        const __m256d q = _mm256_loadu_pd(p + i);
        s[0] = _mm256_fmadd_pd(wi, a, s[0]);
        s[1] = _mm256_fmadd_pd(wi, b, s[1]);
        s[2] = _mm256_fmadd_pd(wi, c, s[2]);
        s[3] = _mm256_fmadd_pd(_mm256_mul_pd(wi, a), a, s[3]);
        s[4] = _mm256_fmadd_pd(_mm256_mul_pd(wi, b), b, s[4]);
        s[5] = _mm256_fmadd_pd(_mm256_mul_pd(wi, c), c, s[5]);
        s[6] = _mm256_fmadd_pd(_mm256_mul_pd(wi, a), b, s[6]);
        s[7] = _mm256_fmadd_pd(_mm256_mul_pd(wi, a), c, s[7]);
        s[8] = _mm256_fmadd_pd(_mm256_mul_pd(wi, b), c, s[8]);
        s[9] = _mm256_fmadd_pd(wi, q, s[9]);
    }
    alignas(32) double lanes[4];
    for (int k = 0; k < 10; ++k) {
        _mm256_store_pd(lanes, s[k]);
        out[k] = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
    }
    for (; i < n; ++i) {
        const double wi = w[i];
        const double a = u1[i], b = u2[i], c = u3[i];
        out[0] += wi * a;
        out[1] += wi * b;
        out[2] += wi * c;
        out[3] += wi * a * a;
        out[4] += wi * b * b;
        out[5] += wi * c * c;
        out[6] += wi * a * b;
        out[7] += wi * a * c;
        out[8] += wi * b * c;
        out[9] += wi * p[i];
    }
}

#else

double weighted_sum_avx2(const double* w, const double* v, std::size_t n) {
    return weighted_sum_scalar(w, v, n);
}

void moment_sums_avx2(const double* w, const double* u1, const double* u2, const double* u3,
                      const double* p, std::size_t n, double out[10]) {
    moment_sums_scalar(w, u1, u2, u3, p, n, out);
}

#endif

}  // namespace detail
}  // namespace kernels
}  // namespace wallflux
