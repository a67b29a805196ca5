#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gsf/linops.hpp"

namespace gsf {

enum class Verdict { Stable, Unstable, Inconclusive };
const char* to_string(Verdict v);

struct IndexReport {
    Matrix d_matrix;
    int n_d = 0;
    // Largest |entry| coupling the phase block to the translation block.
    double cross_block_max = 0.0;
    bool applicable = false;  // det(D) != 0
    int n_l = 0;
    int k_r = 0;
    int k_c = 0;
    // Balancing remainder (n(L) - n(D) - k_r - 2 k_c) / 2.
    double k_i_minus = 0.0;
    bool balanced = false;
};

struct BlockCheck {
    double max_rel_diff = 0.0;
    int compared = 0;
};

struct StabilityReport {
    std::string model_tag;
    int n_lplus = 0;
    std::optional<int> n_lminus;
    int lminus_near_zero = 0;
    // |<v0, phi>| / ||phi|| for the L- eigenvector closest to zero.
    double lminus_kernel_alignment = 0.0;
    double vk_index = 0.0;
    double vk_defect = 0.0;
    Matrix d_matrix;
    int n_d = 0;
    int k_r = 0;
    int k_c = 0;
    double max_real_part = 0.0;
    double spectral_radius = 0.0;
    double stab_tol = 0.0;
    // Bottom of the continuous spectrum of L+: omega + inf Lambda.
    double essential_edge = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::complex<double>> eigenvalues;
    std::optional<IndexReport> index;
    std::optional<BlockCheck> block_check;
    std::vector<std::string> notes;
};

struct EigenClassification {
    int k_r = 0;
    int k_c = 0;
    double max_real_part = 0.0;
};
EigenClassification classify_eigenvalues(const std::vector<std::complex<double>>& mu, double stab_tol);

// Kawahara: eigenvalues of D_x L+.
std::vector<std::complex<double>> kawahara_eigenvalues(const Matrix& lplus, const SpectralGrid& grid);
StabilityReport kawahara_spectrum(const Wave& wave, const LinearizedPair& pair);

// NLS: nu = eig(L- L+), mu = +-sqrt(-nu).
std::vector<std::complex<double>> nls_eigenvalues(const Matrix& lplus, const Matrix& lminus);
// Direct eigenvalues of [[0, -L-], [L+, 0]].
std::vector<std::complex<double>> nls_block_eigenvalues(const Matrix& lplus, const Matrix& lminus);
// Compare the two formulations after dropping 2(d+1) eigenvalues nearest zero.
BlockCheck compare_nls_spectra(const std::vector<std::complex<double>>& product,
                               const std::vector<std::complex<double>>& block, int dim);

struct NlsOptions {
    bool block_check = false;
};
StabilityReport nls_spectrum(const Wave& wave, const LinearizedPair& pair, const NlsOptions& opt = {});

// D matrix from precomputed spectra. Generators: (phi, 0) and (0, -d_j phi).
IndexReport d_matrix_report(const SpectralReport& lplus, const SpectralReport& lminus, const Vector& phi,
                            const std::vector<Vector>& translations, double weight);
IndexReport index_count(const Wave& wave, const LinearizedPair& pair);

// Dispatch on the model family.
StabilityReport analyze_stability(const Wave& wave, const LinearizedPair& pair, const NlsOptions& opt = {});

}  // namespace gsf
