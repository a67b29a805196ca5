#include "gsf/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "gsf/errors.hpp"
#include "gsf/kernels.hpp"

namespace gsf {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Signed FFT frequency index for position i.
int freq_index(int i, int n) { return i <= n / 2 ? (i == n / 2 ? -n / 2 : i) : i - n; }

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

SpectralGrid::SpectralGrid(int dim, int n, double length, bool dealias)
    : SpectralGrid(dim, n, std::array<double, 2>{length, length}, dealias) {}

SpectralGrid::SpectralGrid(int dim, int n, std::array<double, 2> lengths, bool dealias)
    : dim_(dim), n_(n), lengths_(lengths), dealias_(dealias) {
    if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidArgument, "grid dimension must be 1 or 2");
    if (!is_power_of_two(n) || n < 64)
        throw Error(ErrorKind::InvalidArgument, "points per axis must be a power of two and at least 64");
    for (int a = 0; a < dim; ++a)
        if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a]))
            throw Error(ErrorKind::InvalidArgument, "box length must be positive");
    if (dim == 1) lengths_[1] = lengths_[0];

    size_ = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
    const std::size_t half = std::size_t(n) / 2 + 1;
    spec_size_ = dim == 1 ? half : std::size_t(n) * half;
    quad_weight_ = dx(0) * (dim == 2 ? dx(1) : 1.0);

    for (int a = 0; a < 2; ++a) {
        full_k_[a].resize(n);
        for (int i = 0; i < n; ++i) {
            int m = i < n / 2 ? i : i - n;
            full_k_[a][i] = 2.0 * std::numbers::pi * m / lengths_[a];
        }
    }

    sk1_.assign(spec_size_, 0.0);
    sk2_.assign(spec_size_, 0.0);
    mult_.assign(spec_size_, 1.0);
    nyq_.assign(spec_size_, 0);
    cut_.assign(spec_size_, false);
    const double third = n / 3.0;
    if (dim == 1) {
        for (std::size_t m = 0; m < half; ++m) {
            sk1_[m] = 2.0 * std::numbers::pi * double(m) / lengths_[0];
            const bool edge = m == 0 || m == std::size_t(n) / 2;
            mult_[m] = edge ? 1.0 : 2.0;
            if (m == std::size_t(n) / 2) nyq_[m] |= 1u;
            cut_[m] = double(m) > third;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const int m0 = freq_index(i, n);
            for (std::size_t j = 0; j < half; ++j) {
                const std::size_t s = std::size_t(i) * half + j;
                sk1_[s] = full_k_[0][i];
                sk2_[s] = 2.0 * std::numbers::pi * double(j) / lengths_[1];
                const bool edge = j == 0 || j == std::size_t(n) / 2;
                mult_[s] = edge ? 1.0 : 2.0;
                if (i == n / 2) nyq_[s] |= 1u;
                if (j == std::size_t(n) / 2) nyq_[s] |= 2u;
                cut_[s] = std::abs(m0) > third || double(j) > third;
            }
        }
    }

    std::vector<double> rbuf(size_);
    std::vector<cplx> cbuf(spec_size_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
        plan_fwd_ = fftw_plan_dft_r2c_1d(n, rbuf.data(), as_fftw(cbuf.data()), flags);
        plan_inv_ = fftw_plan_dft_c2r_1d(n, as_fftw(cbuf.data()), rbuf.data(), flags | FFTW_DESTROY_INPUT);
    } else {
        plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, rbuf.data(), as_fftw(cbuf.data()), flags);
        plan_inv_ = fftw_plan_dft_c2r_2d(n, n, as_fftw(cbuf.data()), rbuf.data(), flags | FFTW_DESTROY_INPUT);
    }
    if (!plan_fwd_ || !plan_inv_) throw Error(ErrorKind::InvalidArgument, "FFT planning failed");
}

SpectralGrid::~SpectralGrid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void SpectralGrid::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in), as_fftw(out));
}

void SpectralGrid::inverse(const cplx* in, double* out) const {
    std::vector<cplx> scratch(in, in + spec_size_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_), as_fftw(scratch.data()), out);
    const double scale = 1.0 / double(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] *= scale;
}

double SpectralGrid::parseval(const cplx* spec) const {
    double s = 0.0;
    for (std::size_t i = 0; i < spec_size_; ++i) s += mult_[i] * std::norm(spec[i]);
    return s * quad_weight_ / double(size_);
}

bool SpectralGrid::same_layout(const SpectralGrid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && lengths_[0] == o.lengths_[0] &&
           (dim_ == 1 || lengths_[1] == o.lengths_[1]);
}

GridPtr make_grid(int dim, int n, double length, bool dealias) {
    return std::make_shared<const SpectralGrid>(dim, n, length, dealias);
}

GridPtr make_grid(int dim, int n, std::array<double, 2> lengths, bool dealias) {
    return std::make_shared<const SpectralGrid>(dim, n, lengths, dealias);
}

double default_box_length(int dim) { return dim == 1 ? 80.0 : 40.0; }

// ---------------------------------------------------------------- RealField

RealField::RealField(GridPtr grid) : grid_(std::move(grid)) { values_.assign(grid_->size(), 0.0); }

RealField::RealField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
        throw Error(ErrorKind::GridMismatch, "sample count does not match grid size");
}

RealField RealField::from_function(GridPtr grid, const std::function<double(double)>& f) {
    if (grid->dim() != 1) throw Error(ErrorKind::GridMismatch, "one-argument profile on a 2-D grid");
    RealField out(grid);
    for (int i = 0; i < grid->n(); ++i) out[i] = f(grid->coordinate(0, i));
    return out;
}

RealField RealField::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
    RealField out(grid);
    const int n = grid->n();
    if (grid->dim() == 1) {
        for (int i = 0; i < n; ++i) out[i] = f(grid->coordinate(0, i), 0.0);
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[std::size_t(i) * n + j] = f(grid->coordinate(0, i), grid->coordinate(1, j));
    return out;
}

RealField& RealField::operator+=(const RealField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

RealField& RealField::operator-=(const RealField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

RealField& RealField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

void require_same_grid(const RealField& a, const RealField& b) {
    if (!a.grid_ptr() || !b.grid_ptr()) throw Error(ErrorKind::GridMismatch, "field without grid");
    if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_layout(b.grid()))
        throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

bool all_finite(const RealField& f) {
    return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const RealField& f, const char* what) {
    if (!all_finite(f)) throw Error(ErrorKind::NonFinite, std::string("non-finite values in ") + what);
}

Spectrum spectrum(const RealField& f) {
    Spectrum s(f.grid().spectral_size());
    f.grid().forward(f.data(), s.data());
    return s;
}

RealField from_spectrum(const GridPtr& grid, const Spectrum& s) {
    RealField out(grid);
    grid->inverse(s.data(), out.data());
    return out;
}

RealField apply_multiplier(const RealField& f, const std::function<cplx(double, double)>& m, unsigned odd_axes) {
    const SpectralGrid& g = f.grid();
    Spectrum s = spectrum(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool kill = false;
        for (int a = 0; a < 2; ++a)
            if (((odd_axes >> a) & 1u) && g.nyquist(a, i)) kill = true;
        s[i] = kill ? cplx(0.0) : s[i] * m(g.k1(i), g.k2(i));
    }
    return from_spectrum(f.grid_ptr(), s);
}

RealField derivative(const RealField& f, std::array<int, 2> order) {
    if (order[0] < 0 || order[1] < 0 || order[0] + order[1] > 4)
        throw Error(ErrorKind::InvalidArgument, "derivative order must be non-negative with total at most 4");
    if (f.grid().dim() == 1 && order[1] != 0)
        throw Error(ErrorKind::GridMismatch, "axis-1 derivative on a 1-D grid");
    require_finite(f, "derivative input");
    if (order[0] == 0 && order[1] == 0) return f;
    const unsigned odd = (order[0] % 2 ? 1u : 0u) | (order[1] % 2 ? 2u : 0u);
    const int a = order[0], b = order[1];
    return apply_multiplier(
        f,
        [a, b](double k1, double k2) {
            cplx m(1.0, 0.0);
            for (int i = 0; i < a; ++i) m *= cplx(0.0, k1);
            for (int i = 0; i < b; ++i) m *= cplx(0.0, k2);
            return m;
        },
        odd);
}

RealField derivative(const RealField& f, int order) { return derivative(f, {order, 0}); }

double inner(const RealField& f, const RealField& g) {
    require_same_grid(f, g);
    return f.grid().quad_weight() * kernels::omp::dot(f.data(), g.data(), f.size());
}

double norm_sq(const RealField& f) { return inner(f, f); }

double lp_sum(const RealField& f, double q) {
    if (!(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "Lebesgue exponent must be at least 1");
    return f.grid().quad_weight() * kernels::omp::abs_pow_sum(f.data(), f.size(), q);
}

double lp_norm(const RealField& f, double q) { return std::pow(lp_sum(f, q), 1.0 / q); }

RealField two_thirds_filter(const RealField& f) {
    const SpectralGrid& g = f.grid();
    Spectrum s = spectrum(f);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (g.beyond_two_thirds(i)) s[i] = 0.0;
    return from_spectrum(f.grid_ptr(), s);
}

RealField roll(const RealField& f, int s0, int s1) {
    const SpectralGrid& g = f.grid();
    const int n = g.n();
    RealField out(f.grid_ptr());
    auto w = [n](int i) { return ((i % n) + n) % n; };
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) out[w(i + s0)] = f[i];
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[std::size_t(w(i + s0)) * n + w(j + s1)] = f[std::size_t(i) * n + j];
    return out;
}

RealField recenter(const RealField& f) {
    const SpectralGrid& g = f.grid();
    const int n = g.n();
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (std::fabs(f[i]) > std::fabs(f[best])) best = i;
    if (g.dim() == 1) return roll(f, n / 2 - int(best));
    const int i0 = int(best / n), i1 = int(best % n);
    return roll(f, n / 2 - i0, n / 2 - i1);
}

double spectral_tail_fraction(const RealField& f) {
    const SpectralGrid& g = f.grid();
    Spectrum s = spectrum(f);
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = g.multiplicity(i) * std::norm(s[i]);
        total += e;
        if (g.beyond_two_thirds(i)) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace gsf
