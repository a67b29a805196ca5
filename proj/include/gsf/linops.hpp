#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "gsf/grid.hpp"
#include "gsf/models.hpp"

namespace gsf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr std::size_t kDenseRowLimit = 4096;

// Dense circulant matrix of a real even Fourier multiplier.
Matrix multiplier_matrix(const SpectralGrid& grid, const std::function<double(double, double)>& symbol);
// Dense first-derivative matrix along an axis (Nyquist mode removed).
Matrix derivative_matrix(const SpectralGrid& grid, int axis);

struct LinearizedPair {
    Matrix lplus;
    std::optional<Matrix> lminus;
    // Upper estimate of the spectral radius of L+ from the symbol and potential.
    double radius_plus = 0.0;
    double radius_minus = 0.0;
};

// L+ = Lambda + omega - p|phi|^{p-1};  L- = Lambda + omega - |phi|^{p-1} (NLS only).
LinearizedPair assemble(const ModelSpec& model, const Wave& wave);

struct NearZeroMode {
    double value = 0.0;
    Vector vector;
};

struct SpectralReport {
    std::vector<double> eigenvalues;  // ascending
    int negative_count = 0;
    std::vector<NearZeroMode> near_zero;
    double zero_tol = 0.0;
    Matrix eigenvectors;  // columns match eigenvalues; empty if not kept
};

// Full dense symmetric eigendecomposition (LAPACK dsyevd).
SpectralReport symmetric_spectrum(const Matrix& a, double zero_tol, bool keep_vectors = true);

// Eigenvalues of a general real matrix (LAPACK dgeev).
std::vector<std::complex<double>> general_eigenvalues(const Matrix& a);

// Default kernel threshold: 1e-8 times the spectral radius estimate.
double default_zero_tol(double radius);

// Gram matrix G_ij = weight * <A^+ a_i, a_j> with A^+ the inverse of A on the
// complement of its kernel. The kernel is every eigenvector with |mu| <
// zero_tol plus, for each candidate, the eigenvector it overlaps most.
struct DeflatedGram {
    Matrix gram;
    // ||P_K a_i|| / ||a_i|| for each input vector.
    std::vector<double> projection_defect;
    int kernel_dim = 0;
};
DeflatedGram deflated_gram(const SpectralReport& spec, const std::vector<Vector>& vectors,
                           const std::vector<Vector>& kernel_candidates, double weight = 1.0);

struct VkResult {
    double value = 0.0;
    double projection_defect = 0.0;
    int kernel_dim = 0;
};

// <L+^{-1} phi, phi> from an existing spectrum of L+.
VkResult vk_index(const SpectralReport& lplus_spec, const Vector& phi, const std::vector<Vector>& kernel_candidates,
                  double weight = 1.0);
// Dense-matrix form (zero_tol < 0 selects the default from the largest eigenvalue).
VkResult vk_index(const Matrix& lplus, const Vector& phi, double zero_tol = -1.0, double weight = 1.0,
                  const std::vector<Vector>& kernel_candidates = {});
// Wave form: the translation derivatives of the wave are the kernel candidates.
VkResult vk_index(const LinearizedPair& pair, const Wave& wave, double zero_tol = -1.0);

Vector to_vector(const RealField& f);
// Analytic kernel candidates of L+: the first derivatives of the wave.
std::vector<Vector> translation_modes(const Wave& wave);

}  // namespace gsf
