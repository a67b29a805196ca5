#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsf/grid.hpp"

namespace gsf {

struct Kawahara {
    double b = 1.0;
    double p = 2.0;
};

struct MixedNLS {
    int epsilon = -1;
    double bmag = 1.0;
    double p = 3.0;
    int dim = 1;
};

struct LaplacianNLS {
    double b = -1.0;
    double p = 2.0;
    int dim = 2;
};

// Linear symbol Lambda(k) = |k|^4 - s(k), where s is the second-order part:
//   Kawahara      s = b k^2
//   MixedNLS      s = eps |b|^2 k1^2
//   LaplacianNLS  s = b |k|^2
class ModelSpec {
public:
    using Variant = std::variant<Kawahara, MixedNLS, LaplacianNLS>;

    ModelSpec() : ModelSpec(Kawahara{}) {}
    ModelSpec(Kawahara m);
    ModelSpec(MixedNLS m);
    ModelSpec(LaplacianNLS m);

    const Variant& variant() const { return v_; }
    int dim() const;
    double p() const;
    bool is_nls() const { return !std::holds_alternative<Kawahara>(v_); }
    bool is_kawahara() const { return std::holds_alternative<Kawahara>(v_); }

    double symbol(double k1, double k2 = 0.0) const { return quartic(k1, k2) - second_order(k1, k2); }
    static double quartic(double k1, double k2) {
        const double q = k1 * k1 + k2 * k2;
        return q * q;
    }
    double second_order(double k1, double k2 = 0.0) const;
    // b, eps|b|^2 or b: the coefficient in front of the second-order part.
    double second_order_coefficient() const;
    // inf_k Lambda(k) = -max(c, 0)^2 / 4.
    double symbol_floor() const;

    std::string name() const;  // "kawahara", "mixed", "laplacian"
    std::string tag() const;   // name plus parameters

private:
    Variant v_;
};

bool operator==(const ModelSpec& a, const ModelSpec& b);

// Pieces of the energy of f:
//   quartic   = int |Lap f|^2
//   second    = <s f, f>
//   nonlinear = int |f|^{p+1}
//   mass      = int f^2
struct EnergyParts {
    double quartic = 0.0;
    double second = 0.0;
    double nonlinear = 0.0;
    double mass = 0.0;
};

EnergyParts energy_parts(const ModelSpec& model, const RealField& f);

// (Lambda + shift) f
RealField apply_symbol(const ModelSpec& model, const RealField& f, double shift = 0.0);
// <Lambda f, f>, evaluated in Fourier space.
double quadratic_form(const ModelSpec& model, const RealField& f);
// sign(f)|f|^p, with the 2/3 filter applied when the grid asks for it.
RealField nonlinearity(const ModelSpec& model, const RealField& f);

double energy(const ModelSpec& model, const RealField& f);
RealField energy_gradient(const ModelSpec& model, const RealField& f);

struct ResidualNorms {
    double sup = 0.0;
    double l2 = 0.0;
};

RealField el_residual_field(const ModelSpec& model, const RealField& f, double omega);
ResidualNorms el_residual(const ModelSpec& model, const RealField& f, double omega);
double omega_from_field(const ModelSpec& model, const RealField& f);

// Smallest grid value of Lambda + omega.
double min_grid_symbol(const ModelSpec& model, const SpectralGrid& grid, double omega);

enum class Regime { WellPosedAllLambda, LargeLambdaOnly, EnergyUnboundedBelow };

const char* to_string(Regime r);
// (lower, upper) thresholds in p.
std::pair<double, double> regime_thresholds(const ModelSpec& model);
Regime validity_regime(const ModelSpec& model, double lambda);
// p sits exactly on one of the two thresholds.
bool at_regime_threshold(const ModelSpec& model);

enum class SolverKind { GradientFlow, Petviashvili, Imported };
const char* to_string(SolverKind s);
SolverKind solver_from_string(const std::string& s);

struct SolveStats {
    int iterations = 0;
    double grad_norm = 0.0;
    std::string termination;
    std::vector<double> energy_trace;
    double max_mass_drift = 0.0;
};

struct Wave {
    ModelSpec model;
    RealField field;
    double lambda = 0.0;
    double omega = 0.0;
    double energy = 0.0;
    double el_residual_sup = 0.0;
    double el_residual_l2 = 0.0;
    SolverKind solver = SolverKind::Imported;
    SolveStats stats;
};

// Fill lambda, omega, energy and residual norms from the field.
Wave make_wave(const ModelSpec& model, RealField field, SolverKind solver);

// Explicit soliton sqrt(3/10) sech^2(x/sqrt(20)) of k^4 + k^2 with omega = 4/25
// and p = 3, summed over the two neighbouring periodic images.
RealField explicit_soliton(const GridPtr& grid);
inline constexpr double kExplicitSolitonOmega = 0.16;
double explicit_soliton_lambda();  // 4/sqrt(5)

}  // namespace gsf
