#include "gsf/linops.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "gsf/errors.hpp"
#include "gsf/kernels.hpp"

namespace gsf {

namespace {

void guard_rows(std::size_t rows) {
    if (rows > kDenseRowLimit) {
        std::ostringstream os;
        os << "dense operator with " << rows << " rows exceeds the limit of " << kDenseRowLimit;
        throw Error(ErrorKind::MemoryGuard, os.str());
    }
}

Matrix circulant_from_spectrum(const SpectralGrid& grid, const Spectrum& spec) {
    guard_rows(grid.size());
    std::vector<double> c(grid.size());
    grid.inverse(spec.data(), c.data());
    Matrix m(grid.size(), grid.size());
    kernels::omp::circulant_assemble(c.data(), grid.dim(), grid.n(), m.data());
    return m;
}

}  // namespace

Matrix multiplier_matrix(const SpectralGrid& grid, const std::function<double(double, double)>& symbol) {
    Spectrum s(grid.spectral_size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = symbol(grid.k1(i), grid.k2(i));
    return circulant_from_spectrum(grid, s);
}

Matrix derivative_matrix(const SpectralGrid& grid, int axis) {
    if (axis < 0 || axis >= grid.dim()) throw Error(ErrorKind::InvalidArgument, "derivative axis out of range");
    Spectrum s(grid.spectral_size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = grid.nyquist(axis, i) ? cplx(0.0) : cplx(0.0, axis == 0 ? grid.k1(i) : grid.k2(i));
    return circulant_from_spectrum(grid, s);
}

LinearizedPair assemble(const ModelSpec& model, const Wave& wave) {
    const RealField& phi = wave.field;
    const SpectralGrid& g = phi.grid();
    if (g.dim() != model.dim()) throw Error(ErrorKind::GridMismatch, "wave grid does not match the model");
    guard_rows(g.size());
    double amax = 0.0;
    for (double v : phi.values()) amax = std::max(amax, std::fabs(v));
    if (!(wave.el_residual_sup <= 1e-3 * (1.0 + std::fabs(wave.omega)) * std::max(amax, 1e-300)))
        throw Error(ErrorKind::InvalidArgument, "wave is not converged enough for linearization");

    const double p = model.p(), omega = wave.omega;
    double smax = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i)
        smax = std::max(smax, std::fabs(model.symbol(g.k1(i), g.k2(i)) + omega));

    LinearizedPair pair;
    Matrix base = multiplier_matrix(g, [&](double k1, double k2) { return model.symbol(k1, k2) + omega; });
    std::vector<double> pot(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) pot[i] = std::pow(std::fabs(phi[i]), p - 1.0);
    const double pmax = std::pow(amax, p - 1.0);

    if (model.is_nls()) {
        pair.lminus = base;
        for (std::size_t i = 0; i < g.size(); ++i) (*pair.lminus)(i, i) -= pot[i];
        pair.radius_minus = smax + pmax;
    }
    pair.lplus = std::move(base);
    for (std::size_t i = 0; i < g.size(); ++i) pair.lplus(i, i) -= p * pot[i];
    pair.radius_plus = smax + p * pmax;
    return pair;
}

double default_zero_tol(double radius) { return 1e-8 * radius; }

SpectralReport symmetric_spectrum(const Matrix& a, double zero_tol, bool keep_vectors) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
    const lapack_int n = lapack_int(a.rows());
    const double anorm = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(anorm, 1e-300))
        throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric");
    Matrix work = a;
    std::vector<double> w(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, keep_vectors ? 'V' : 'N', 'U', n, work.data(), n, w.data());
    if (info != 0) {
        std::ostringstream os;
        os << "symmetric eigensolver failed (info " << info << ")";
        throw Error(ErrorKind::EigensolverFailure, os.str());
    }
    SpectralReport r;
    r.eigenvalues = std::move(w);
    r.zero_tol = zero_tol;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        const double mu = r.eigenvalues[i];
        if (mu < -zero_tol) ++r.negative_count;
        if (std::fabs(mu) < zero_tol) {
            NearZeroMode m;
            m.value = mu;
            if (keep_vectors) m.vector = work.col(i);
            r.near_zero.push_back(std::move(m));
        }
    }
    if (keep_vectors) r.eigenvectors = std::move(work);
    return r;
}

std::vector<std::complex<double>> general_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
    const lapack_int n = lapack_int(a.rows());
    Matrix work = a;
    std::vector<double> wr(n), wi(n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(), nullptr,
                                          1, nullptr, 1);
    if (info != 0) {
        std::ostringstream os;
        os << "general eigensolver failed (info " << info << ")";
        throw Error(ErrorKind::EigensolverFailure, os.str());
    }
    std::vector<std::complex<double>> out(n);
    for (lapack_int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
    return out;
}

DeflatedGram deflated_gram(const SpectralReport& spec, const std::vector<Vector>& vectors,
                           const std::vector<Vector>& kernel_candidates, double weight) {
    const Matrix& V = spec.eigenvectors;
    if (V.size() == 0) throw Error(ErrorKind::InvalidArgument, "spectrum was computed without eigenvectors");
    const std::size_t n = spec.eigenvalues.size();
    const double zt = spec.zero_tol;

    std::set<std::size_t> kernel;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(spec.eigenvalues[i]) < zt) kernel.insert(i);
    for (const Vector& c : kernel_candidates) {
        const double cn = c.norm();
        if (!(cn > 0.0)) continue;
        const Vector ov = V.transpose() * (c / cn);
        Eigen::Index best = 0;
        ov.cwiseAbs().maxCoeff(&best);
        if (std::fabs(ov(best)) > 0.5) kernel.insert(std::size_t(best));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(spec.eigenvalues[i]);
        if (!kernel.count(i) && a >= zt && a < 10.0 * zt) {
            std::ostringstream os;
            os << "eigenvalue " << spec.eigenvalues[i] << " lies between zero_tol " << zt << " and 10*zero_tol";
            throw Error(ErrorKind::AmbiguousKernel, os.str());
        }
    }

    const std::size_t m = vectors.size();
    Matrix A(n, m);
    for (std::size_t j = 0; j < m; ++j) A.col(j) = vectors[j];
    const Matrix C = V.transpose() * A;  // n x m coefficients

    DeflatedGram out;
    out.kernel_dim = int(kernel.size());
    out.gram = Matrix::Zero(m, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (kernel.count(i)) continue;
        out.gram += (C.row(i).transpose() * C.row(i)) / spec.eigenvalues[i];
    }
    out.gram *= weight;
    for (std::size_t j = 0; j < m; ++j) {
        double k2 = 0.0;
        for (std::size_t i : kernel) k2 += C(i, j) * C(i, j);
        const double an = vectors[j].norm();
        out.projection_defect.push_back(an > 0.0 ? std::sqrt(k2) / an : 0.0);
    }
    return out;
}

VkResult vk_index(const SpectralReport& spec, const Vector& phi, const std::vector<Vector>& kernel_candidates,
                  double weight) {
    if (spec.negative_count != 1) {
        std::ostringstream os;
        os << "L+ has " << spec.negative_count << " negative eigenvalues; the index needs exactly one";
        throw Error(ErrorKind::MorseIndexMismatch, os.str());
    }
    const DeflatedGram g = deflated_gram(spec, {phi}, kernel_candidates, weight);
    return {g.gram(0, 0), g.projection_defect[0], g.kernel_dim};
}

VkResult vk_index(const Matrix& lplus, const Vector& phi, double zero_tol, double weight,
                  const std::vector<Vector>& kernel_candidates) {
    double zt = zero_tol;
    if (zt < 0.0) {
        const SpectralReport probe = symmetric_spectrum(lplus, 0.0, false);
        const double rad = std::max(std::fabs(probe.eigenvalues.front()), std::fabs(probe.eigenvalues.back()));
        zt = default_zero_tol(rad);
    }
    return vk_index(symmetric_spectrum(lplus, zt, true), phi, kernel_candidates, weight);
}

Vector to_vector(const RealField& f) { return Eigen::Map<const Vector>(f.data(), Eigen::Index(f.size())); }

std::vector<Vector> translation_modes(const Wave& wave) {
    std::vector<Vector> out;
    for (int a = 0; a < wave.field.grid().dim(); ++a) {
        std::array<int, 2> ord{0, 0};
        ord[a] = 1;
        out.push_back(to_vector(derivative(wave.field, ord)));
    }
    return out;
}

VkResult vk_index(const LinearizedPair& pair, const Wave& wave, double zero_tol) {
    const double zt = zero_tol < 0.0 ? default_zero_tol(pair.radius_plus) : zero_tol;
    return vk_index(symmetric_spectrum(pair.lplus, zt, true), to_vector(wave.field), translation_modes(wave),
                    wave.field.grid().quad_weight());
}

}  // namespace gsf
