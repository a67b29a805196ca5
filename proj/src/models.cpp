#include "gsf/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsf/errors.hpp"
#include "gsf/kernels.hpp"

namespace gsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "nonlinearity power p must exceed 1");
}

void check_dim(int d) {
    if (d != 1 && d != 2) throw Error(ErrorKind::InvalidArgument, "model dimension must be 1 or 2");
}

void check_field(const ModelSpec& model, const RealField& f) {
    if (!f.grid_ptr()) throw Error(ErrorKind::GridMismatch, "field without grid");
    if (f.grid().dim() != model.dim())
        throw Error(ErrorKind::GridMismatch, "field dimension does not match model dimension");
}

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, std::string("non-finite ") + what);
    return v;
}

}  // namespace

ModelSpec::ModelSpec(Kawahara m) : v_(m) {
    check_p(m.p);
    if (!std::isfinite(m.b)) throw Error(ErrorKind::InvalidArgument, "b must be finite");
}

ModelSpec::ModelSpec(MixedNLS m) : v_(m) {
    check_p(m.p);
    check_dim(m.dim);
    if (m.epsilon != 1 && m.epsilon != -1) throw Error(ErrorKind::InvalidArgument, "epsilon must be +1 or -1");
    if (!(m.bmag >= 0.0) || !std::isfinite(m.bmag)) throw Error(ErrorKind::InvalidArgument, "|b| must be non-negative");
}

ModelSpec::ModelSpec(LaplacianNLS m) : v_(m) {
    check_p(m.p);
    check_dim(m.dim);
    if (!std::isfinite(m.b)) throw Error(ErrorKind::InvalidArgument, "b must be finite");
}

int ModelSpec::dim() const {
    return std::visit(overloaded{[](const Kawahara&) { return 1; }, [](const MixedNLS& m) { return m.dim; },
                                 [](const LaplacianNLS& m) { return m.dim; }},
                      v_);
}

double ModelSpec::p() const {
    return std::visit([](const auto& m) { return m.p; }, v_);
}

double ModelSpec::second_order_coefficient() const {
    return std::visit(overloaded{[](const Kawahara& m) { return m.b; },
                                 [](const MixedNLS& m) { return m.epsilon * m.bmag * m.bmag; },
                                 [](const LaplacianNLS& m) { return m.b; }},
                      v_);
}

double ModelSpec::second_order(double k1, double k2) const {
    const double c = second_order_coefficient();
    if (std::holds_alternative<MixedNLS>(v_)) return c * k1 * k1;
    return c * (k1 * k1 + k2 * k2);
}

double ModelSpec::symbol_floor() const {
    const double c = std::max(second_order_coefficient(), 0.0);
    return -0.25 * c * c;
}

std::string ModelSpec::name() const {
    return std::visit(overloaded{[](const Kawahara&) { return std::string("kawahara"); },
                                 [](const MixedNLS&) { return std::string("mixed"); },
                                 [](const LaplacianNLS&) { return std::string("laplacian"); }},
                      v_);
}

std::string ModelSpec::tag() const {
    std::ostringstream os;
    std::visit(overloaded{[&](const Kawahara& m) { os << "kawahara(b=" << m.b << ",p=" << m.p << ")"; },
                          [&](const MixedNLS& m) {
                              os << "mixed(eps=" << m.epsilon << ",|b|=" << m.bmag << ",p=" << m.p
                                 << ",d=" << m.dim << ")";
                          },
                          [&](const LaplacianNLS& m) {
                              os << "laplacian(b=" << m.b << ",p=" << m.p << ",d=" << m.dim << ")";
                          }},
               v_);
    return os.str();
}

bool operator==(const ModelSpec& a, const ModelSpec& b) {
    if (a.variant().index() != b.variant().index()) return false;
    return a.p() == b.p() && a.dim() == b.dim() && a.second_order_coefficient() == b.second_order_coefficient();
}

// ------------------------------------------------------------------ energy

EnergyParts energy_parts(const ModelSpec& model, const RealField& f) {
    check_field(model, f);
    const SpectralGrid& g = f.grid();
    Spectrum s = spectrum(f);
    double q = 0.0, sec = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = g.multiplicity(i) * std::norm(s[i]);
        q += w * ModelSpec::quartic(g.k1(i), g.k2(i));
        sec += w * model.second_order(g.k1(i), g.k2(i));
    }
    const double scale = g.quad_weight() / double(g.size());
    EnergyParts e;
    e.quartic = q * scale;
    e.second = sec * scale;
    e.nonlinear = lp_sum(f, model.p() + 1.0);
    e.mass = norm_sq(f);
    return e;
}

RealField apply_symbol(const ModelSpec& model, const RealField& f, double shift) {
    check_field(model, f);
    return apply_multiplier(f, [&](double k1, double k2) { return cplx(model.symbol(k1, k2) + shift, 0.0); });
}

double quadratic_form(const ModelSpec& model, const RealField& f) {
    const EnergyParts e = energy_parts(model, f);
    return e.quartic - e.second;
}

RealField nonlinearity(const ModelSpec& model, const RealField& f) {
    RealField out(f.grid_ptr());
    kernels::omp::power_nonlinearity(f.data(), out.data(), f.size(), model.p());
    if (f.grid().dealias()) return two_thirds_filter(out);
    return out;
}

double energy(const ModelSpec& model, const RealField& f) {
    const EnergyParts e = energy_parts(model, f);
    return finite_or_throw(0.5 * (e.quartic - e.second) - e.nonlinear / (model.p() + 1.0), "energy");
}

RealField energy_gradient(const ModelSpec& model, const RealField& f) {
    RealField g = apply_symbol(model, f);
    g -= nonlinearity(model, f);
    require_finite(g, "energy gradient");
    return g;
}

RealField el_residual_field(const ModelSpec& model, const RealField& f, double omega) {
    if (!std::isfinite(omega)) throw Error(ErrorKind::NonFinite, "omega is not finite");
    RealField r = apply_symbol(model, f, omega);
    r -= nonlinearity(model, f);
    return r;
}

ResidualNorms el_residual(const ModelSpec& model, const RealField& f, double omega) {
    const RealField r = el_residual_field(model, f, omega);
    ResidualNorms out;
    for (double v : r.values()) out.sup = std::max(out.sup, std::fabs(v));
    out.l2 = std::sqrt(norm_sq(r));
    finite_or_throw(out.sup + out.l2, "residual");
    return out;
}

double omega_from_field(const ModelSpec& model, const RealField& f) {
    const EnergyParts e = energy_parts(model, f);
    if (!(e.mass > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega is undefined for the zero field");
    return finite_or_throw((e.nonlinear - (e.quartic - e.second)) / e.mass, "omega");
}

double min_grid_symbol(const ModelSpec& model, const SpectralGrid& grid, double omega) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.spectral_size(); ++i) m = std::min(m, model.symbol(grid.k1(i), grid.k2(i)));
    return m + omega;
}

// ----------------------------------------------------------------- regimes

const char* to_string(Regime r) {
    switch (r) {
        case Regime::WellPosedAllLambda: return "WellPosedAllLambda";
        case Regime::LargeLambdaOnly: return "LargeLambdaOnly";
        case Regime::EnergyUnboundedBelow: return "EnergyUnboundedBelow";
    }
    return "?";
}

std::pair<double, double> regime_thresholds(const ModelSpec& model) {
    const double d = model.dim();
    return std::visit(overloaded{[](const Kawahara&) { return std::pair{5.0, 9.0}; },
                                 [d](const MixedNLS&) { return std::pair{1.0 + 8.0 / (d + 1.0), 1.0 + 8.0 / d}; },
                                 [d](const LaplacianNLS&) { return std::pair{1.0 + 4.0 / d, 1.0 + 8.0 / d}; }},
                      model.variant());
}

Regime validity_regime(const ModelSpec& model, double /*lambda*/) {
    const auto [lo, hi] = regime_thresholds(model);
    const double p = model.p();
    if (p >= hi) return Regime::EnergyUnboundedBelow;
    if (p >= lo) return Regime::LargeLambdaOnly;
    return Regime::WellPosedAllLambda;
}

bool at_regime_threshold(const ModelSpec& model) {
    const auto [lo, hi] = regime_thresholds(model);
    return model.p() == lo || model.p() == hi;
}

const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::GradientFlow: return "GradientFlow";
        case SolverKind::Petviashvili: return "Petviashvili";
        case SolverKind::Imported: return "Imported";
    }
    return "?";
}

SolverKind solver_from_string(const std::string& s) {
    if (s == "GradientFlow") return SolverKind::GradientFlow;
    if (s == "Petviashvili") return SolverKind::Petviashvili;
    if (s == "Imported") return SolverKind::Imported;
    throw Error(ErrorKind::Parse, "unknown solver kind '" + s + "'");
}

Wave make_wave(const ModelSpec& model, RealField field, SolverKind solver) {
    check_field(model, field);
    require_finite(field, "wave field");
    Wave w;
    w.model = model;
    w.field = std::move(field);
    w.solver = solver;
    w.lambda = norm_sq(w.field);
    w.omega = omega_from_field(model, w.field);
    w.energy = energy(model, w.field);
    const ResidualNorms r = el_residual(model, w.field, w.omega);
    w.el_residual_sup = r.sup;
    w.el_residual_l2 = r.l2;
    return w;
}

RealField explicit_soliton(const GridPtr& grid) {
    if (grid->dim() != 1) throw Error(ErrorKind::GridMismatch, "the explicit soliton is one-dimensional");
    const double amp = std::sqrt(0.3), width = std::sqrt(20.0), L = grid->length(0);
    auto phi = [&](double x) {
        const double c = 1.0 / std::cosh(x / width);
        return amp * c * c;
    };
    return RealField::from_function(grid, [&](double x) { return phi(x) + phi(x - L) + phi(x + L); });
}

double explicit_soliton_lambda() { return 4.0 / std::sqrt(5.0); }

}  // namespace gsf
