#pragma once

// Data-parallel kernels. Every kernel has a plain serial reference and an
// OpenMP version with the same signature; the library calls the OpenMP one.
// Reductions in the OpenMP path sum fixed-size blocks and then combine the
// block partials in order, so results do not depend on the thread count.

#include <complex>
#include <cstddef>

namespace gsf::kernels {

// Threads used by the OpenMP kernels. GSF_THREADS caps the value.
int configure_threads_from_env();
int max_threads();

namespace serial {
void power_nonlinearity(const double* f, double* out, std::size_t n, double p);
double dot(const double* a, const double* b, std::size_t n);
double abs_pow_sum(const double* a, std::size_t n, double q);
// Dense circulant (d=1) or block-circulant (d=2) matrix from its first
// column c; out is column-major with n^dim rows.
void circulant_assemble(const double* c, int dim, int n, double* out);
// Real part of sum_m coef[m] exp(i k_m . x) at arbitrary points.
void fourier_eval(const std::complex<double>* coef, const double* k1, const double* k2,
                  std::size_t modes, const double* x1, const double* x2, std::size_t points,
                  double* out);
}  // namespace serial

namespace omp {
void power_nonlinearity(const double* f, double* out, std::size_t n, double p);
double dot(const double* a, const double* b, std::size_t n);
double abs_pow_sum(const double* a, std::size_t n, double q);
void circulant_assemble(const double* c, int dim, int n, double* out);
void fourier_eval(const std::complex<double>* coef, const double* k1, const double* k2,
                  std::size_t modes, const double* x1, const double* x2, std::size_t points,
                  double* out);
}  // namespace omp

inline constexpr std::size_t kReductionBlock = 4096;

}  // namespace gsf::kernels
