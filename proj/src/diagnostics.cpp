#include "gsf/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gsf/errors.hpp"

namespace gsf {

// ---------------------------------------------------------------- identities

PohozaevResult pohozaev_residuals(const Wave& wave) {
    PohozaevResult r;
    const double d = wave.model.dim(), p = wave.model.p(), w = wave.omega;
    r.alpha = (d * (p - 1) - 2 * (p + 1)) / (2 * (p + 1));
    r.beta = (d * (p - 1) - 4 * (p + 1)) / (2 * (p + 1));
    r.parts = energy_parts(wave.model, wave.field);
    const double A = r.parts.quartic, B = r.parts.second, C = r.parts.nonlinear, D = r.parts.mass;
    const double c1 = d * (p - 1) - 4 * (p + 1), c2 = d * (p - 1) - 2 * (p + 1), c3 = w * d * (p - 1);
    r.raw1 = A - r.alpha * C - w * D;
    r.raw2 = B - r.beta * C - 2 * w * D;
    r.raw3 = c1 * A - c2 * B + c3 * D;
    auto rel = [](double v, double s) { return s > 0.0 ? std::fabs(v) / s : 0.0; };
    r.r1 = rel(r.raw1, std::fabs(A) + std::fabs(r.alpha * C) + std::fabs(w * D));
    r.r2 = rel(r.raw2, std::fabs(B) + std::fabs(r.beta * C) + std::fabs(2 * w * D));
    r.r3 = rel(r.raw3, std::fabs(c1 * A) + std::fabs(c2 * B) + std::fabs(c3 * D));
    return r;
}

double virial_residual(const Wave& wave) {
    const RealField& phi = wave.field;
    const SpectralGrid& g = phi.grid();
    const RealField r = el_residual_field(wave.model, phi, wave.omega);
    RealField xg(phi.grid_ptr());
    const int n = g.n();
    for (int a = 0; a < g.dim(); ++a) {
        std::array<int, 2> ord{0, 0};
        ord[a] = 1;
        const RealField da = derivative(phi, ord);
        for (std::size_t i = 0; i < xg.size(); ++i) {
            const int idx = g.dim() == 1 ? int(i) : (a == 0 ? int(i / n) : int(i % n));
            xg[i] += g.coordinate(a, idx) * da[i];
        }
    }
    const Spectrum s = spectrum(phi);
    double h2 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double q = 1.0 + g.ksq(i);
        h2 += g.multiplicity(i) * q * q * std::norm(s[i]);
    }
    h2 *= g.quad_weight() / double(g.size());
    return h2 > 0.0 ? std::fabs(inner(r, xg)) / h2 : 0.0;
}

// ----------------------------------------------------------------- GNS probe

const char* to_string(GnsForm f) {
    switch (f) {
        case GnsForm::KawaharaShifted: return "kawahara";
        case GnsForm::Anisotropic: return "anisotropic";
        case GnsForm::Isotropic: return "isotropic";
    }
    return "?";
}

GnsForm gns_form_from_string(const std::string& s) {
    if (s == "kawahara") return GnsForm::KawaharaShifted;
    if (s == "anisotropic") return GnsForm::Anisotropic;
    if (s == "isotropic") return GnsForm::Isotropic;
    throw Error(ErrorKind::Parse, "unknown GNS family '" + s + "'");
}

double gns_ratio(const ModelSpec& model, GnsForm form, const RealField& f) {
    const SpectralGrid& g = f.grid();
    const double b = model.second_order_coefficient();
    const Spectrum s = spectrum(f);
    double q = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double k1s = g.k1(i) * g.k1(i), ks = g.ksq(i);
        double sym = 0.0;
        switch (form) {
            case GnsForm::KawaharaShifted: sym = (ks - 0.5 * b) * (ks - 0.5 * b); break;
            case GnsForm::Anisotropic: sym = ks * ks + k1s; break;
            case GnsForm::Isotropic: sym = ks * ks + ks; break;
        }
        q += g.multiplicity(i) * sym * std::norm(s[i]);
    }
    q *= g.quad_weight() / double(g.size());
    const double p = model.p();
    const double lhs = lp_sum(f, p + 1.0), mass = norm_sq(f);
    return lhs / (std::pow(mass, 0.5 * (p - 1.0)) * q);
}

double gns_predicted_slope(const ModelSpec& model, GnsForm form) {
    const double p = model.p(), d = model.dim();
    switch (form) {
        case GnsForm::KawaharaShifted: return 0.5 * (p - 5.0);
        case GnsForm::Anisotropic: return 0.5 * (d + 1.0) * (p - 1.0) - 4.0;
        case GnsForm::Isotropic: return 0.5 * d * (p - 1.0) - 2.0;
    }
    return 0.0;
}

namespace {

int pow2_at_least(double v) {
    int n = 64;
    while (n < v && n < (1 << 20)) n *= 2;
    return n;
}

}  // namespace

GnsReport gns_probe(const ModelSpec& model, const GnsFamilySpec& spec) {
    if (spec.eps.empty()) throw Error(ErrorKind::InvalidArgument, "GNS probe needs at least one eps");
    const int d = model.dim();
    if (spec.form == GnsForm::KawaharaShifted && (d != 1 || !(model.second_order_coefficient() > 0.0)))
        throw Error(ErrorKind::InvalidArgument, "the shifted Kawahara form needs d = 1 and b > 0");
    if (spec.form == GnsForm::Anisotropic && d != 2)
        throw Error(ErrorKind::InvalidArgument, "the anisotropic family needs d = 2");

    constexpr double L0 = 24.0;  // box for chi(y) = exp(-|y|^2/2)
    GnsReport rep;
    rep.predicted_slope = gns_predicted_slope(model, spec.form);
    std::vector<double> eps = spec.eps;
    std::sort(eps.begin(), eps.end());
    for (double e : eps) {
        if (!(e > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
        GridPtr grid;
        RealField f;
        if (spec.form == GnsForm::KawaharaShifted) {
            const double kappa = std::sqrt(0.5 * model.second_order_coefficient());
            const double L = L0 / e;
            const int n = pow2_at_least(std::max(128.0, 2.0 * (kappa + 12.0 * e) * L / M_PI));
            grid = make_grid(1, n, L);
            f = RealField::from_function(grid, [e, kappa](double x) { return std::exp(-0.5 * e * e * x * x) * std::cos(kappa * x); });
        } else if (spec.form == GnsForm::Anisotropic) {
            grid = make_grid(2, 128, std::array<double, 2>{L0 / (e * e), L0 / e});
            f = RealField::from_function(grid, [e](double x, double y) {
                const double a = e * e * x, b = e * y;
                return std::exp(-0.5 * (a * a + b * b));
            });
        } else {
            grid = make_grid(d, d == 1 ? 256 : 128, L0 / e);
            f = RealField::from_function(grid, [e](double x, double y) { return std::exp(-0.5 * e * e * (x * x + y * y)); });
        }
        rep.rows.push_back({e, gns_ratio(model, spec.form, f), grid->n()});
    }
    // Least-squares slope over eps in [eps_min, 10 eps_min].
    const double emin = rep.rows.front().eps;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const GnsRow& r : rep.rows) {
        if (r.eps > 10.0 * emin * (1 + 1e-12)) continue;
        const double x = std::log(r.eps), y = std::log(r.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 2) rep.small_eps_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.unbounded = m >= 2 && rep.small_eps_slope < -0.1;
    return rep;
}

// --------------------------------------------------------------------- sweep

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "Pass";
        case CheckStatus::Fail: return "Fail";
        case CheckStatus::Skipped: return "Skipped";
    }
    return "?";
}

bool PropertyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.status == CheckStatus::Pass; });
}

SweepRow solve_row(const ModelSpec& model, const GridPtr& grid, double lambda, const SolveConfig& cfg,
                   RealField* minimizer) {
    SweepRow row;
    row.lambda = lambda;
    try {
        const Wave w = normalized_gradient_flow(model, grid, lambda, cfg);
        const EnergyParts e = energy_parts(model, w.field);
        row.m = w.energy;
        row.omega = w.omega;
        row.lp_norm_p1 = e.nonlinear;
        row.quartic = e.quartic;
        row.second = e.second;
        row.el_residual_sup = w.el_residual_sup;
        row.el_residual_l2 = w.el_residual_l2;
        row.grad_norm = w.stats.grad_norm;
        row.iterations = w.stats.iterations;
        row.ok = true;
        if (minimizer) *minimizer = w.field;
    } catch (const Error& err) {
        row.ok = false;
        row.error = std::string(to_string(err.kind())) + ": " + err.what();
    }
    return row;
}

SweepResult sweep(const ModelSpec& model, const GridPtr& grid, const std::vector<double>& lambdas, const SweepConfig& cfg) {
    if (lambdas.size() < 4) throw Error(ErrorKind::InvalidArgument, "a sweep needs at least four lambda values");
    std::vector<double> lam = lambdas;
    std::sort(lam.begin(), lam.end());
    if (std::adjacent_find(lam.begin(), lam.end()) != lam.end())
        throw Error(ErrorKind::InvalidArgument, "lambda values must be distinct");
    if (lam.front() <= 0.0) throw Error(ErrorKind::InvalidArgument, "lambda values must be positive");

    SweepResult out;
    out.rows.resize(lam.size());
    if (cfg.warm_start) {
        RealField prev;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            SolveConfig sc = cfg.solve;
            if (prev.size() > 0) sc.seed_field = prev;
            RealField next;
            out.rows[i] = solve_row(model, grid, lam[i], sc, &next);
            if (out.rows[i].ok) prev = std::move(next);
        }
    } else {
        const int workers = std::max(1, cfg.parallel);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(lam.size()); ++i)
            out.rows[i] = solve_row(model, grid, lam[i], cfg.solve);
    }
    out.report = check_properties(model, out.rows, cfg.solve.grad_tol);
    return out;
}

namespace {

struct CheckBuilder {
    PropertyCheck c;
    CheckBuilder(std::string id, std::string desc, double tol) {
        c.id = std::move(id);
        c.description = std::move(desc);
        c.tolerance = tol;
        c.status = CheckStatus::Pass;
    }
    void fail(const std::string& what) {
        c.status = CheckStatus::Fail;
        if (!c.detail.empty()) c.detail += "; ";
        c.detail += what;
    }
    void skip(const std::string& why) {
        c.status = CheckStatus::Skipped;
        c.detail = why;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

PropertyReport check_properties(const ModelSpec& model, std::vector<SweepRow> rows, double grad_tol) {
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.lambda < b.lambda; });
    const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
    std::vector<SweepRow> good;
    for (const SweepRow& r : rows)
        if (r.ok) good.push_back(r);
    const std::size_t n = good.size();
    const double p = model.p();
    const double limit = 0.5 * model.symbol_floor();  // lim m/lambda as lambda -> 0
    const std::string skip_msg = "a row failed to solve; neighbour-based checks are skipped";

    PropertyReport rep;
    auto fd = [&](auto get, std::size_t i) {
        return (get(good[i + 1]) - get(good[i - 1])) / (good[i + 1].lambda - good[i - 1].lambda);
    };
    auto m_of = [](const SweepRow& r) { return r.m; };
    auto w_of = [](const SweepRow& r) { return r.omega; };

    {
        CheckBuilder b("i", "m(lambda) < 0", 0.0);
        for (const SweepRow& r : good) {
            b.c.worst = std::max(b.c.worst == 0.0 ? r.m : b.c.worst, r.m);
            if (!(r.m < 0.0)) b.fail("m = " + fmt(r.m) + " at lambda " + fmt(r.lambda));
        }
        if (n == 0) b.skip("no successful rows");
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("ii", "m strictly decreasing", 0.0);
        if (!all_ok) b.skip(skip_msg);
        else
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (!(good[i + 1].m < good[i].m)) b.fail("m increases after lambda " + fmt(good[i].lambda));
        rep.checks.push_back(b.c);
    }
    {
        double mmax = 0.0, noise = 0.0;
        for (const SweepRow& r : good) {
            mmax = std::max(mmax, std::fabs(r.m));
            noise = std::max(noise, 4.0 * std::max(r.grad_norm, grad_tol) * std::sqrt(r.lambda));
        }
        const double tol = 1e-6 * mmax + noise;
        CheckBuilder b("iii", "discrete concavity of m", tol);
        if (!all_ok) b.skip(skip_msg);
        else
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double hp = good[i + 1].lambda - good[i].lambda, hm = good[i].lambda - good[i - 1].lambda;
                const double s = ((good[i + 1].m - good[i].m) / hp - (good[i].m - good[i - 1].m) / hm) * 0.5 * (hp + hm);
                b.c.worst = i == 1 ? s : std::max(b.c.worst, s);
                if (s > tol) b.fail("second difference " + fmt(s) + " at lambda " + fmt(good[i].lambda));
            }
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("iv", "centered m' matches -omega/2", 0.05);
        if (!all_ok || n < 3) b.skip(all_ok ? "fewer than three rows" : skip_msg);
        else
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double d = fd(m_of, i), target = -0.5 * good[i].omega;
                const double rel = std::fabs(d - target) / std::fabs(target);
                b.c.worst = std::max(b.c.worst, rel);
                if (!(rel < 0.05)) b.fail("relative mismatch " + fmt(rel) + " at lambda " + fmt(good[i].lambda));
            }
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("v", "omega non-decreasing", 1e-9);
        if (!all_ok) b.skip(skip_msg);
        else
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (good[i + 1].omega < good[i].omega - 1e-9 * std::fabs(good[i].omega))
                    b.fail("omega drops after lambda " + fmt(good[i].lambda));
        rep.checks.push_back(b.c);
    }
    {
        const double bound = -model.symbol_floor();
        CheckBuilder b("vi", "omega above the symbol floor bound", bound);
        for (const SweepRow& r : good) {
            b.c.worst = b.c.worst == 0.0 ? r.omega : std::min(b.c.worst, r.omega);
            if (!(r.omega > bound)) b.fail("omega = " + fmt(r.omega) + " at lambda " + fmt(r.lambda));
        }
        if (n == 0) b.skip("no successful rows");
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("vii", "trapezoid integral of omega equals -2 delta m", 0.02);
        if (!all_ok || n < 2) b.skip(all_ok ? "fewer than two rows" : skip_msg);
        else {
            double integral = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i)
                integral += 0.5 * (good[i].omega + good[i + 1].omega) * (good[i + 1].lambda - good[i].lambda);
            const double target = -2.0 * (good.back().m - good.front().m);
            const double rel = std::fabs(integral - target) / std::fabs(target);
            b.c.worst = rel;
            if (!(rel < 0.02)) b.fail("relative mismatch " + fmt(rel));
        }
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("viii", "omega' lower bound (p-1)/(2 lambda^2) int |phi|^{p+1}", 0.1);
        if (!all_ok || n < 3) b.skip(all_ok ? "fewer than three rows" : skip_msg);
        else
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double d = fd(w_of, i);
                const double bound = (p - 1.0) / (2.0 * good[i].lambda * good[i].lambda) * good[i].lp_norm_p1;
                const double ratio = d / bound;
                b.c.worst = i == 1 ? ratio : std::min(b.c.worst, ratio);
                if (!(d >= bound * 0.9)) b.fail("omega'/bound = " + fmt(ratio) + " at lambda " + fmt(good[i].lambda));
            }
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("ix", "subadditivity m(lambda) < m(a) + m(lambda - a)", 0.0);
        auto find = [&](double l) -> const SweepRow* {
            for (const SweepRow& r : good)
                if (std::fabs(r.lambda - l) <= 1e-9 * std::max(1.0, l)) return &r;
            return nullptr;
        };
        int tested = 0;
        for (const SweepRow& r : good)
            for (double frac : {0.25, 0.5}) {
                const SweepRow* a = find(frac * r.lambda);
                const SweepRow* c = find((1.0 - frac) * r.lambda);
                if (!a || !c) continue;
                ++tested;
                const double gap = r.m - (a->m + c->m);
                b.c.worst = tested == 1 ? gap : std::max(b.c.worst, gap);
                if (!(gap < 0.0)) b.fail("not subadditive at lambda " + fmt(r.lambda));
            }
        if (tested == 0) b.skip("no lambda pairs present in the grid");
        else b.c.detail = std::to_string(tested) + " pairs";
        rep.checks.push_back(b.c);
    }
    {
        CheckBuilder b("x", "m/lambda below its small-lambda limit and non-increasing", limit);
        if (!all_ok || n < 2) b.skip(all_ok ? "fewer than two rows" : skip_msg);
        else
            for (std::size_t i = 0; i < n; ++i) {
                const double q = good[i].m / good[i].lambda;
                b.c.worst = i == 0 ? q : std::max(b.c.worst, q);
                if (!(q < limit)) b.fail("m/lambda = " + fmt(q) + " not below " + fmt(limit));
                if (i > 0 && q > good[i - 1].m / good[i - 1].lambda)
                    b.fail("m/lambda increases at lambda " + fmt(good[i].lambda));
            }
        rep.checks.push_back(b.c);
    }
    return rep;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << "\n";
    os << std::setprecision(17);
    for (const SweepRow& r : rows) {
        os << r.lambda << ',' << r.m << ',' << r.omega << ',' << r.lp_norm_p1 << ',' << r.quartic << ',' << r.second
           << ',' << r.el_residual_sup << ',' << r.el_residual_l2 << ',' << r.grad_norm << ',' << r.iterations << ','
           << (r.ok ? "ok" : "error") << "\n";
    }
}

}  // namespace gsf
