#include "gsf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsf/errors.hpp"

namespace gsf {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

EigenClassification classify_eigenvalues(const std::vector<std::complex<double>>& mu, double stab_tol) {
    EigenClassification c;
    c.max_real_part = mu.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (const auto& m : mu) {
        c.max_real_part = std::max(c.max_real_part, m.real());
        if (m.real() <= stab_tol) continue;
        if (std::fabs(m.imag()) < stab_tol)
            ++c.k_r;
        else if (m.imag() > stab_tol)
            ++c.k_c;
    }
    return c;
}

namespace {

Verdict combine(bool spectrum_ok, bool criterion_ok) {
    if (spectrum_ok && criterion_ok) return Verdict::Stable;
    if (!spectrum_ok && !criterion_ok) return Verdict::Unstable;
    return Verdict::Inconclusive;
}

double max_abs_wavenumber(const SpectralGrid& g, int axis) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.spectral_size(); ++i)
        if (!g.nyquist(axis, i)) m = std::max(m, std::fabs(axis == 0 ? g.k1(i) : g.k2(i)));
    return m;
}

}  // namespace

std::vector<std::complex<double>> kawahara_eigenvalues(const Matrix& lplus, const SpectralGrid& grid) {
    const Matrix M = derivative_matrix(grid, 0) * lplus;
    return general_eigenvalues(M);
}

StabilityReport kawahara_spectrum(const Wave& wave, const LinearizedPair& pair) {
    if (!wave.model.is_kawahara()) throw Error(ErrorKind::InvalidArgument, "kawahara_spectrum needs a Kawahara wave");
    const SpectralGrid& g = wave.field.grid();
    StabilityReport r;
    r.model_tag = wave.model.tag();
    r.essential_edge = wave.omega + wave.model.symbol_floor();

    const SpectralReport sp = symmetric_spectrum(pair.lplus, default_zero_tol(pair.radius_plus), true);
    r.n_lplus = sp.negative_count;
    bool criterion = false;
    if (r.n_lplus == 1) {
        const VkResult vk = vk_index(sp, to_vector(wave.field), translation_modes(wave), g.quad_weight());
        r.vk_index = vk.value;
        r.vk_defect = vk.projection_defect;
        criterion = vk.value < 0.0;
    } else {
        r.notes.push_back("n(L+) != 1; the index criterion does not apply");
    }

    r.eigenvalues = kawahara_eigenvalues(pair.lplus, g);
    r.spectral_radius = max_abs_wavenumber(g, 0) * pair.radius_plus;
    r.stab_tol = 1e-6 * r.spectral_radius;
    const EigenClassification c = classify_eigenvalues(r.eigenvalues, r.stab_tol);
    r.k_r = c.k_r;
    r.k_c = c.k_c;
    r.max_real_part = c.max_real_part;
    r.verdict = combine(c.max_real_part < r.stab_tol, criterion);
    return r;
}

std::vector<std::complex<double>> nls_eigenvalues(const Matrix& lplus, const Matrix& lminus) {
    const Matrix prod = lminus * lplus;
    const auto nu = general_eigenvalues(prod);
    std::vector<std::complex<double>> mu;
    mu.reserve(2 * nu.size());
    for (const auto& v : nu) {
        const std::complex<double> m = std::sqrt(-v);
        mu.push_back(m);
        mu.push_back(-m);
    }
    return mu;
}

std::vector<std::complex<double>> nls_block_eigenvalues(const Matrix& lplus, const Matrix& lminus) {
    const Eigen::Index n = lplus.rows();
    Matrix B = Matrix::Zero(2 * n, 2 * n);
    B.topRightCorner(n, n) = -lminus;
    B.bottomLeftCorner(n, n) = lplus;
    return general_eigenvalues(B);
}

BlockCheck compare_nls_spectra(const std::vector<std::complex<double>>& product,
                               const std::vector<std::complex<double>>& block, int dim) {
    auto mags = [](const std::vector<std::complex<double>>& v) {
        std::vector<double> m;
        m.reserve(v.size());
        for (const auto& z : v) m.push_back(std::abs(z));
        std::sort(m.begin(), m.end());
        return m;
    };
    const std::vector<double> a = mags(product), b = mags(block);
    if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "spectra have different sizes");
    const std::size_t skip = std::size_t(2 * (dim + 1));
    BlockCheck out;
    for (std::size_t i = skip; i < a.size(); ++i) {
        out.max_rel_diff = std::max(out.max_rel_diff, std::fabs(a[i] - b[i]) / b[i]);
        ++out.compared;
    }
    return out;
}

IndexReport d_matrix_report(const SpectralReport& lplus, const SpectralReport& lminus, const Vector& phi,
                            const std::vector<Vector>& translations, double weight) {
    const std::size_t d = translations.size();
    IndexReport r;
    r.d_matrix = Matrix::Zero(d + 1, d + 1);
    const DeflatedGram gp = deflated_gram(lplus, {phi}, translations, weight);
    const DeflatedGram gm = deflated_gram(lminus, translations, {phi}, weight);
    r.d_matrix(0, 0) = gp.gram(0, 0);
    r.d_matrix.bottomRightCorner(d, d) = gm.gram;
    // Phase/translation couplings: L^{-1} is block diagonal and the generators
    // live in different blocks, so these inner products vanish identically.
    r.cross_block_max = r.d_matrix.row(0).tail(d).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Matrix> es(r.d_matrix);
    const Vector ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    r.n_d = int((ev.array() < 0.0).count());
    r.applicable = scale > 0.0 && ev.cwiseAbs().minCoeff() > 1e-10 * scale;
    return r;
}

StabilityReport nls_spectrum(const Wave& wave, const LinearizedPair& pair, const NlsOptions& opt) {
    if (!wave.model.is_nls() || !pair.lminus) throw Error(ErrorKind::InvalidArgument, "nls_spectrum needs an NLS wave");
    const SpectralGrid& g = wave.field.grid();
    const double w = g.quad_weight();
    StabilityReport r;
    r.model_tag = wave.model.tag();
    r.essential_edge = wave.omega + wave.model.symbol_floor();

    const Vector phi = to_vector(wave.field);
    const std::vector<Vector> trans = translation_modes(wave);
    const SpectralReport sp = symmetric_spectrum(pair.lplus, default_zero_tol(pair.radius_plus), true);
    const SpectralReport sm = symmetric_spectrum(*pair.lminus, default_zero_tol(pair.radius_minus), true);
    r.n_lplus = sp.negative_count;
    r.n_lminus = sm.negative_count;
    r.lminus_near_zero = int(sm.near_zero.size());
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < sm.eigenvalues.size(); ++i)
            if (std::fabs(sm.eigenvalues[i]) < std::fabs(sm.eigenvalues[best])) best = i;
        r.lminus_kernel_alignment = std::fabs(sm.eigenvectors.col(best).dot(phi)) / phi.norm();
    }

    bool criterion = false;
    if (r.n_lplus == 1) {
        const VkResult vk = vk_index(sp, phi, trans, w);
        r.vk_index = vk.value;
        r.vk_defect = vk.projection_defect;
        criterion = vk.value < 0.0 && r.n_lminus == 0;
    } else {
        r.notes.push_back("n(L+) != 1; the index criterion does not apply");
    }

    IndexReport idx = d_matrix_report(sp, sm, phi, trans, w);
    r.d_matrix = idx.d_matrix;
    r.n_d = idx.n_d;

    r.eigenvalues = nls_eigenvalues(pair.lplus, *pair.lminus);
    r.spectral_radius = std::sqrt(pair.radius_plus * pair.radius_minus);
    r.stab_tol = 1e-6 * r.spectral_radius;
    const EigenClassification c = classify_eigenvalues(r.eigenvalues, r.stab_tol);
    r.k_r = c.k_r;
    r.k_c = c.k_c;
    r.max_real_part = c.max_real_part;
    r.verdict = combine(c.max_real_part < r.stab_tol, criterion);

    idx.n_l = r.n_lplus + *r.n_lminus;
    idx.k_r = c.k_r;
    idx.k_c = c.k_c;
    idx.k_i_minus = 0.5 * double(idx.n_l - idx.n_d - idx.k_r - 2 * idx.k_c);
    idx.balanced = idx.applicable && idx.k_i_minus >= 0.0 && idx.k_i_minus == std::floor(idx.k_i_minus);
    r.index = idx;

    if (opt.block_check) r.block_check = compare_nls_spectra(r.eigenvalues, nls_block_eigenvalues(pair.lplus, *pair.lminus), g.dim());
    return r;
}

IndexReport index_count(const Wave& wave, const LinearizedPair& pair) { return *nls_spectrum(wave, pair).index; }

StabilityReport analyze_stability(const Wave& wave, const LinearizedPair& pair, const NlsOptions& opt) {
    return wave.model.is_kawahara() ? kawahara_spectrum(wave, pair) : nls_spectrum(wave, pair, opt);
}

}  // namespace gsf
