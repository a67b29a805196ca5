#include "gsf/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace gsf::kernels {

int configure_threads_from_env() {
    int cap = omp_get_num_procs();
    if (const char* env = std::getenv("GSF_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) cap = std::min(cap, v);
        } catch (...) {
        }
    }
    cap = std::max(cap, 1);
    omp_set_num_threads(cap);
    return cap;
}

int max_threads() { return omp_get_max_threads(); }

namespace {

inline double signed_pow(double v, double p) {
    double a = std::pow(std::fabs(v), p);
    return v < 0 ? -a : a;
}

inline std::size_t wrap(long d, int n) { return static_cast<std::size_t>(((d % n) + n) % n); }

}  // namespace

namespace serial {

void power_nonlinearity(const double* f, double* out, std::size_t n, double p) {
    for (std::size_t i = 0; i < n; ++i) out[i] = signed_pow(f[i], p);
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double abs_pow_sum(const double* a, std::size_t n, double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(a[i]), q);
    return s;
}

void circulant_assemble(const double* c, int dim, int n, double* out) {
    if (dim == 1) {
        const std::size_t m = n;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i) out[j * m + i] = c[wrap(long(i) - long(j), n)];
        return;
    }
    const std::size_t m = std::size_t(n) * n;
    for (std::size_t j = 0; j < m; ++j) {
        const long j0 = long(j / n), j1 = long(j % n);
        for (std::size_t i = 0; i < m; ++i) {
            const long i0 = long(i / n), i1 = long(i % n);
            out[j * m + i] = c[wrap(i0 - j0, n) * n + wrap(i1 - j1, n)];
        }
    }
}

void fourier_eval(const std::complex<double>* coef, const double* k1, const double* k2,
                  std::size_t modes, const double* x1, const double* x2, std::size_t points,
                  double* out) {
    for (std::size_t j = 0; j < points; ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            double ph = k1[m] * x1[j] + (k2 ? k2[m] * x2[j] : 0.0);
            s += coef[m].real() * std::cos(ph) - coef[m].imag() * std::sin(ph);
        }
        out[j] = s;
    }
}

}  // namespace serial

namespace omp {

void power_nonlinearity(const double* f, double* out, std::size_t n, double p) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) out[i] = signed_pow(f[i], p);
}

double dot(const double* a, const double* b, std::size_t n) {
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < std::ptrdiff_t(blocks); ++blk) {
        const std::size_t lo = blk * kReductionBlock, hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[blk] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

double abs_pow_sum(const double* a, std::size_t n, double q) {
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < std::ptrdiff_t(blocks); ++blk) {
        const std::size_t lo = blk * kReductionBlock, hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::fabs(a[i]), q);
        partial[blk] = s;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

void circulant_assemble(const double* c, int dim, int n, double* out) {
    if (dim == 1) {
        const std::size_t m = n;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(m); ++j)
            for (std::size_t i = 0; i < m; ++i) out[j * m + i] = c[wrap(long(i) - long(j), n)];
        return;
    }
    const std::size_t m = std::size_t(n) * n;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(m); ++j) {
        const long j0 = long(j / n), j1 = long(j % n);
        double* col = out + j * m;
        for (long i0 = 0; i0 < n; ++i0) {
            const double* row = c + wrap(i0 - j0, n) * n;
            for (long i1 = 0; i1 < n; ++i1) col[i0 * n + i1] = row[wrap(i1 - j1, n)];
        }
    }
}

void fourier_eval(const std::complex<double>* coef, const double* k1, const double* k2,
                  std::size_t modes, const double* x1, const double* x2, std::size_t points,
                  double* out) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(points); ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            double ph = k1[m] * x1[j] + (k2 ? k2[m] * x2[j] : 0.0);
            s += coef[m].real() * std::cos(ph) - coef[m].imag() * std::sin(ph);
        }
        out[j] = s;
    }
}

}  // namespace omp

}  // namespace gsf::kernels
