#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace gsf {

using cplx = std::complex<double>;

// Periodic collocation grid on [-L/2, L/2)^d, d in {1,2}. Sample (i0, i1) is
// stored row-major at i0 * n + i1; axis 0 is x1.
//
// Spectra use the real-to-complex half layout: d=1 holds m = 0..n/2, d=2
// holds n rows (axis 0, full FFT ordering) of n/2+1 entries (axis 1).
class SpectralGrid {
public:
    SpectralGrid(int dim, int n, double length, bool dealias = false);
    SpectralGrid(int dim, int n, std::array<double, 2> lengths, bool dealias = false);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length(int axis) const { return lengths_[axis]; }
    double dx(int axis) const { return lengths_[axis] / n_; }
    double quad_weight() const { return quad_weight_; }
    bool dealias() const { return dealias_; }
    std::size_t size() const { return size_; }
    std::size_t spectral_size() const { return spec_size_; }

    double coordinate(int axis, int i) const { return -0.5 * lengths_[axis] + dx(axis) * i; }
    // Full FFT-ordered wavenumbers along one axis.
    const std::vector<double>& wavenumbers(int axis) const { return full_k_[axis]; }

    // Per half-spectrum entry.
    double k1(std::size_t s) const { return sk1_[s]; }
    double k2(std::size_t s) const { return sk2_[s]; }
    double ksq(std::size_t s) const { return sk1_[s] * sk1_[s] + sk2_[s] * sk2_[s]; }
    bool nyquist(int axis, std::size_t s) const { return (nyq_[s] >> axis) & 1u; }
    // Multiplicity of a half-spectrum entry in the full spectrum (1 or 2).
    double multiplicity(std::size_t s) const { return mult_[s]; }
    // True outside the 2/3-rule band.
    bool beyond_two_thirds(std::size_t s) const { return cut_[s]; }

    // Unnormalised forward transform; inverse includes the 1/n^d factor and
    // does not modify its input.
    void forward(const double* in, cplx* out) const;
    void inverse(const cplx* in, double* out) const;

    // Quadrature of f^2 computed from the half spectrum of f.
    double parseval(const cplx* spec) const;

    bool same_layout(const SpectralGrid& other) const;

private:
    int dim_;
    int n_;
    std::array<double, 2> lengths_;
    bool dealias_;
    std::size_t size_;
    std::size_t spec_size_;
    double quad_weight_;
    std::array<std::vector<double>, 2> full_k_;
    std::vector<double> sk1_, sk2_, mult_;
    std::vector<unsigned char> nyq_;
    std::vector<bool> cut_;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(int dim, int n, double length, bool dealias = false);
GridPtr make_grid(int dim, int n, std::array<double, 2> lengths, bool dealias = false);
// Default box: L = 80 for d=1, L = 40 per axis for d=2.
double default_box_length(int dim);

class RealField {
public:
    RealField() = default;
    explicit RealField(GridPtr grid);
    RealField(GridPtr grid, std::vector<double> values);

    static RealField from_function(GridPtr grid, const std::function<double(double)>& f);
    static RealField from_function(GridPtr grid, const std::function<double(double, double)>& f);

    const SpectralGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double s);
    friend RealField operator+(RealField a, const RealField& b) { return a += b; }
    friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
    friend RealField operator*(double s, RealField a) { return a *= s; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

using Spectrum = std::vector<cplx>;

void require_same_grid(const RealField& a, const RealField& b);
void require_finite(const RealField& f, const char* what);
bool all_finite(const RealField& f);

Spectrum spectrum(const RealField& f);
RealField from_spectrum(const GridPtr& grid, const Spectrum& s);

// Fourier multiplier m(k1, k2) applied to f. Nyquist entries are zeroed on
// every axis listed in odd_axes (bit mask).
RealField apply_multiplier(const RealField& f, const std::function<cplx(double, double)>& m,
                           unsigned odd_axes = 0);

RealField derivative(const RealField& f, std::array<int, 2> order);
RealField derivative(const RealField& f, int order);  // d=1 shorthand

double inner(const RealField& f, const RealField& g);
double norm_sq(const RealField& f);
// quad_weight * sum |f|^q
double lp_sum(const RealField& f, double q);
double lp_norm(const RealField& f, double q);

// Zero all modes outside the 2/3 band.
RealField two_thirds_filter(const RealField& f);

// Circular shift by whole grid points (s0 along axis 0, s1 along axis 1).
RealField roll(const RealField& f, int s0, int s1 = 0);
// Shift so the largest |f| sample sits at the box origin.
RealField recenter(const RealField& f);

// Fraction of L^2 mass carried by modes outside the 2/3 band.
double spectral_tail_fraction(const RealField& f);

}  // namespace gsf
