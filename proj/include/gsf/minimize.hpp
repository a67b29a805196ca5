#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsf/grid.hpp"
#include "gsf/models.hpp"

namespace gsf {

enum class SeedProfile { Gaussian, Sech2, FromFile };
const char* to_string(SeedProfile s);
SeedProfile seed_from_string(const std::string& s);

struct SolveConfig {
    int max_iters = 20000;
    double step0 = 1.0;
    // Target for the L2 norm of the sphere-projected gradient (flow) or the
    // Euler-Lagrange residual (Petviashvili).
    double grad_tol = 1e-10;
    // Relative energy change below which an iteration counts as stalled.
    double energy_stall_tol = 1e-15;
    // Accepted iterations without gradient progress before the flow stops.
    int stall_window = 1500;
    SeedProfile seed_profile = SeedProfile::Gaussian;
    double seed_width = 3.0;
    // Required for FromFile; when present it is used for any profile.
    std::optional<RealField> seed_field;
    bool center_after = true;
    // Run even when the regime is EnergyUnboundedBelow.
    bool force = false;
    // Collapse floor: I < -collapse_scale * (1 + lambda^collapse_exponent).
    double collapse_scale = 1e6;
    double collapse_exponent = 2.0;
    bool record_trace = false;

    void validate() const;
};

// Seed scaled so that its L2 mass is lambda.
RealField make_seed(const GridPtr& grid, double lambda, const SolveConfig& cfg);

// Preconditioned projected descent on the sphere ||phi||^2 = lambda with
// backtracking so that the energy never increases.
Wave normalized_gradient_flow(const ModelSpec& model, const GridPtr& grid, double lambda,
                              const SolveConfig& cfg);

Wave petviashvili(const ModelSpec& model, const GridPtr& grid, double omega, const SolveConfig& cfg);

enum class ScalingFamily {
    Isotropic,    // eps^{d/2} phi(eps x)
    Anisotropic,  // eps^{(d+1)/2} phi(eps^2 x1, eps x')
};

struct ScalingRow {
    double eps = 0.0;
    double closed_form = 0.0;
    double spectral = 0.0;
    // Scaled field fits in the box and is spectrally resolved.
    bool resolved = true;
    // "quartic", "second" or "nonlinear": largest term in magnitude.
    std::string dominant;
};

// Energy exponents of the three terms along the family, in the order
// quartic, second, nonlinear (leading powers).
struct ScalingExponents {
    double quartic, second, nonlinear;
};
ScalingExponents scaling_exponents(const ModelSpec& model, ScalingFamily family);

std::vector<ScalingRow> scaling_probe(const ModelSpec& model, const RealField& f,
                                      const std::vector<double>& eps_list,
                                      ScalingFamily family = ScalingFamily::Isotropic);

// Closed-form energy of the scaled family from the Fourier moments of f.
double scaling_energy_closed_form(const ModelSpec& model, const RealField& f, double eps,
                                  ScalingFamily family = ScalingFamily::Isotropic);

}  // namespace gsf
