#pragma once

#include <cstddef>
#include <string>

namespace wallflux {
namespace kernels {

/// Reduction backends. Scalar is the reference implementation; AVX2 is an
/// equivalence-tested vector variant selected at runtime on capable CPUs.
enum class Backend { Scalar, Avx2 };

Backend active_backend();
std::string backend_name();

/// Force a backend. Throws if the requested backend is not available on this
/// machine. "auto" re-runs detection (also honors WALLFLUX_SIMD env).
void set_backend(const std::string& name);

bool avx2_available();

/// Weighted reduction sum_i w[i]*v[i]. Deterministic accumulation order for a
/// fixed backend.
double weighted_sum(const double* w, const double* v, std::size_t n);

/// Fused first and second moments of a velocity/pressure sample set:
/// out[0..2] = sum w*u, out[3..8] = sum w*(u x u) packed (11,22,33,12,13,23),
/// out[9] = sum w*p. This is the mollification inner loop.
void moment_sums(const double* w, const double* u1, const double* u2, const double* u3,
                 const double* p, std::size_t n, double out[10]);

namespace detail {
double weighted_sum_scalar(const double* w, const double* v, std::size_t n);
void moment_sums_scalar(const double* w, const double* u1, const double* u2, const double* u3,
                        const double* p, std::size_t n, double out[10]);
double weighted_sum_avx2(const double* w, const double* v, std::size_t n);
void moment_sums_avx2(const double* w, const double* u1, const double* u2, const double* u3,
                      const double* p, std::size_t n, double out[10]);
}  // namespace detail

}  // namespace kernels
}  // namespace wallflux
