#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gsf/minimize.hpp"
#include "gsf/models.hpp"

namespace gsf {

// Integral identities for solutions of the profile equation, with
//   A = int |Lap phi|^2, B = <s phi, phi>, C = int |phi|^{p+1}, D = int phi^2,
//   alpha = (d(p-1) - 2(p+1)) / (2(p+1)), beta = (d(p-1) - 4(p+1)) / (2(p+1)):
//   R1 = A - alpha C - omega D
//   R2 = B - beta C - 2 omega D
//   R3 = (d(p-1) - 4(p+1)) A - (d(p-1) - 2(p+1)) B + omega d(p-1) D
// r_i is |R_i| over the sum of the magnitudes of its terms.
struct PohozaevResult {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double raw1 = 0.0, raw2 = 0.0, raw3 = 0.0;
    double alpha = 0.0, beta = 0.0;
    EnergyParts parts;
};
PohozaevResult pohozaev_residuals(const Wave& wave);

// |<r, x . grad phi>| / ||phi||_{H^2}^2 with r the Euler-Lagrange residual.
double virial_residual(const Wave& wave);

enum class GnsForm {
    KawaharaShifted,  // Q = int phi''^2 - b phi'^2 + b^2/4 phi^2, family chi(eps x) cos(sqrt(b/2) x)
    Anisotropic,      // Q = int |Lap g|^2 + |d1 g|^2, family chi(eps^2 x1, eps x')
    Isotropic,        // Q = int |Lap g|^2 + |grad g|^2, family chi(eps x)
};
const char* to_string(GnsForm f);
GnsForm gns_form_from_string(const std::string& s);

struct GnsFamilySpec {
    GnsForm form = GnsForm::KawaharaShifted;
    std::vector<double> eps;
};

struct GnsRow {
    double eps = 0.0;
    double ratio = 0.0;
    int n = 0;
};

struct GnsReport {
    std::vector<GnsRow> rows;
    // Log-log slope of the ratio over the smallest decade of eps.
    double small_eps_slope = 0.0;
    // Power-counting prediction for that slope.
    double predicted_slope = 0.0;
    // Ratio grows without bound as eps -> 0: the inequality cannot hold.
    bool unbounded = false;
};

// ratio(eps) = ||phi||_{p+1}^{p+1} / (||phi||_2^{p-1} Q[phi]) along the family,
// each member evaluated on its own grid scaled to the member's extent.
GnsReport gns_probe(const ModelSpec& model, const GnsFamilySpec& spec);
double gns_predicted_slope(const ModelSpec& model, GnsForm form);
// The same ratio for an arbitrary field.
double gns_ratio(const ModelSpec& model, GnsForm form, const RealField& f);

struct SweepRow {
    double lambda = 0.0;
    double m = 0.0;
    double omega = 0.0;
    double lp_norm_p1 = 0.0;  // int |phi|^{p+1}
    double quartic = 0.0;     // int |Lap phi|^2
    double second = 0.0;      // <s phi, phi>
    double el_residual_sup = 0.0;
    double el_residual_l2 = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool ok = false;
    std::string error;
};

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus s);

struct PropertyCheck {
    std::string id;
    std::string description;
    CheckStatus status = CheckStatus::Skipped;
    double worst = 0.0;  // worst observed margin quantity
    double tolerance = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool all_pass() const;
};

struct SweepConfig {
    SolveConfig solve;
    bool warm_start = true;
    // Concurrent cold-started rows; ignored when warm_start is set.
    int parallel = 1;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    PropertyReport report;
};

SweepRow solve_row(const ModelSpec& model, const GridPtr& grid, double lambda, const SolveConfig& cfg,
                   RealField* minimizer = nullptr);
SweepResult sweep(const ModelSpec& model, const GridPtr& grid, const std::vector<double>& lambdas,
                  const SweepConfig& cfg);
PropertyReport check_properties(const ModelSpec& model, std::vector<SweepRow> rows, double grad_tol);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
inline constexpr const char* kSweepCsvHeader =
    "lambda,m,omega,lp_norm_p1,quartic,second,el_residual_sup,el_residual_l2,grad_norm,iterations,status";

}  // namespace gsf
