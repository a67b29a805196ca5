#include "gsf/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsf/errors.hpp"
#include "gsf/kernels.hpp"

namespace gsf {

const char* to_string(SeedProfile s) {
    switch (s) {
        case SeedProfile::Gaussian: return "gaussian";
        case SeedProfile::Sech2: return "sech2";
        case SeedProfile::FromFile: return "file";
    }
    return "?";
}

SeedProfile seed_from_string(const std::string& s) {
    if (s == "gaussian") return SeedProfile::Gaussian;
    if (s == "sech2") return SeedProfile::Sech2;
    if (s == "file") return SeedProfile::FromFile;
    throw Error(ErrorKind::Parse, "unknown seed profile '" + s + "'");
}

void SolveConfig::validate() const {
    if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be at least 1");
    if (!(step0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "step0 must be positive");
    if (!(grad_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "grad_tol must be positive");
    if (!(energy_stall_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "energy_stall_tol must be positive");
    if (stall_window < 1) throw Error(ErrorKind::InvalidArgument, "stall_window must be at least 1");
    if (!(seed_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "seed_width must be positive");
    if (!(collapse_scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "collapse_scale must be positive");
    if (seed_profile == SeedProfile::FromFile && !seed_field)
        throw Error(ErrorKind::InvalidArgument, "seed profile 'file' needs a seed field");
}

RealField make_seed(const GridPtr& grid, double lambda, const SolveConfig& cfg) {
    RealField f;
    if (cfg.seed_field) {
        f = *cfg.seed_field;
        if (!f.grid().same_layout(*grid)) throw Error(ErrorKind::GridMismatch, "seed field is on a different grid");
        f = RealField(grid, f.values());
    } else {
        const double s = cfg.seed_width;
        if (cfg.seed_profile == SeedProfile::Sech2) {
            f = RealField::from_function(grid, [s](double x, double y) {
                const double c = 1.0 / std::cosh(std::sqrt(x * x + y * y) / s);
                return c * c;
            });
        } else {
            f = RealField::from_function(grid, [s](double x, double y) { return std::exp(-(x * x + y * y) / (2 * s * s)); });
        }
    }
    const double m = norm_sq(f);
    if (!(m > 0.0)) throw Error(ErrorKind::InvalidArgument, "seed has zero mass");
    f *= std::sqrt(lambda / m);
    return f;
}

namespace {

struct Moments {
    // int k1^a k2^b |F|^2, quadrature-normalised
    double m40 = 0, m22 = 0, m04 = 0, m20 = 0, m02 = 0;
    double nonlinear = 0;
};

Moments fourier_moments(const ModelSpec& model, const RealField& f) {
    const SpectralGrid& g = f.grid();
    Spectrum s = spectrum(f);
    Moments m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = g.multiplicity(i) * std::norm(s[i]);
        const double a = g.k1(i) * g.k1(i), b = g.k2(i) * g.k2(i);
        m.m40 += w * a * a;
        m.m22 += w * a * b;
        m.m04 += w * b * b;
        m.m20 += w * a;
        m.m02 += w * b;
    }
    const double sc = g.quad_weight() / double(g.size());
    m.m40 *= sc;
    m.m22 *= sc;
    m.m04 *= sc;
    m.m20 *= sc;
    m.m02 *= sc;
    m.nonlinear = lp_sum(f, model.p() + 1.0);
    return m;
}

struct ScaledTerms {
    double quartic, second, nonlinear;
};

ScaledTerms scaled_terms(const ModelSpec& model, const Moments& m, double e, ScalingFamily family) {
    const int d = model.dim();
    const double p = model.p(), c = model.second_order_coefficient();
    const bool mixed = std::holds_alternative<MixedNLS>(model.variant());
    ScaledTerms t{};
    if (family == ScalingFamily::Isotropic) {
        const double e2 = e * e;
        t.quartic = e2 * e2 * (m.m40 + 2 * m.m22 + m.m04);
        t.second = c * e2 * (mixed ? m.m20 : m.m20 + m.m02);
        t.nonlinear = std::pow(e, 0.5 * d * (p - 1.0)) * m.nonlinear;
    } else {
        const double a1 = e * e * e * e, a2 = e * e;  // k1 -> e^2 k1, k' -> e k'
        t.quartic = a1 * a1 * m.m40 + 2 * a1 * a2 * m.m22 + a2 * a2 * m.m04;
        t.second = c * (mixed ? a1 * m.m20 : a1 * m.m20 + a2 * m.m02);
        t.nonlinear = std::pow(e, 0.5 * (d + 1) * (p - 1.0)) * m.nonlinear;
    }
    return t;
}

double scaled_energy(const ModelSpec& model, const ScaledTerms& t) {
    return 0.5 * (t.quartic - t.second) - t.nonlinear / (model.p() + 1.0);
}

// Minimum of the closed-form family energy over eps in [1, 1e8]; a value
// below the collapse floor certifies that the energy is unbounded below.
double scaling_witness(const ModelSpec& model, const RealField& f) {
    const Moments m = fourier_moments(model, f);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 160; ++i) {
        const double e = std::pow(10.0, i / 20.0);
        best = std::min(best, scaled_energy(model, scaled_terms(model, m, e, ScalingFamily::Isotropic)));
    }
    return best;
}

double energy_scale(const ModelSpec& model, const EnergyParts& e) {
    return 0.5 * std::fabs(e.quartic) + 0.5 * std::fabs(e.second) + e.nonlinear / (model.p() + 1.0);
}

RealField project_out(const RealField& v, const RealField& u, double uu) {
    RealField out = v;
    const double c = inner(v, u) / uu;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * u[i];
    return out;
}

}  // namespace

Wave normalized_gradient_flow(const ModelSpec& model, const GridPtr& grid, double lambda, const SolveConfig& cfg) {
    cfg.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
    if (grid->dim() != model.dim()) throw Error(ErrorKind::GridMismatch, "grid dimension does not match the model");
    const Regime regime = validity_regime(model, lambda);
    if (regime == Regime::EnergyUnboundedBelow && !cfg.force)
    {
        std::ostringstream os;
        os << "energy is unbounded below for " << model.tag() << ": p = " << model.p()
           << " and the minimization is ill-posed for p >= " << regime_thresholds(model).second
           << " (m(lambda) = -infinity for every lambda > 0); rerun with force to proceed";
        throw Error(ErrorKind::RegimeRefusal, os.str());
    }

    const double floor = -cfg.collapse_scale * (1.0 + std::pow(lambda, cfg.collapse_exponent));
    const double sigma = std::max(0.0, -model.symbol_floor()) + 1.0;
    auto precondition = [&](const RealField& v) {
        return apply_multiplier(v, [&](double k1, double k2) { return cplx(1.0 / (model.symbol(k1, k2) + sigma), 0.0); });
    };
    auto normalize = [lambda](RealField& v) {
        const double m = norm_sq(v);
        if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::NonFinite, "iterate lost its mass");
        v *= std::sqrt(lambda / m);
    };
    auto projected_gradient = [&](const RealField& v) {
        RealField g = energy_gradient(model, v);
        return project_out(g, v, lambda);
    };

    RealField phi = make_seed(grid, lambda, cfg);
    EnergyParts parts = energy_parts(model, phi);
    double E = 0.5 * (parts.quartic - parts.second) - parts.nonlinear / (model.p() + 1.0);

    SolveStats stats;
    if (cfg.record_trace) stats.energy_trace.push_back(E);

    auto collapse_checks = [&](int it) {
        if (E < floor) {
            std::ostringstream os;
            os << "energy " << E << " fell below the collapse floor " << floor << " at iteration " << it;
            throw Error(ErrorKind::Collapse, os.str());
        }
        if (regime != Regime::EnergyUnboundedBelow) return;
        if (spectral_tail_fraction(phi) > 1e-6) {
            std::ostringstream os;
            os << "iterate concentrated to the grid scale at iteration " << it;
            throw Error(ErrorKind::Collapse, os.str());
        }
        if (it % 25 == 0) {
            const double w = scaling_witness(model, phi);
            if (w < floor) {
                std::ostringstream os;
                os << "mass-preserving rescaling of the iterate reaches energy " << w << " below the floor " << floor
                   << " at iteration " << it;
                throw Error(ErrorKind::Collapse, os.str());
            }
        }
    };

    double tau = cfg.step0;
    int accepted = 0;
    double best_gn = std::numeric_limits<double>::infinity();
    int since_best = 0;
    RealField pg = projected_gradient(phi);
    double gn = std::sqrt(norm_sq(pg));
    bool converged = false;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        collapse_checks(it);
        if (gn < cfg.grad_tol) {
            converged = true;
            stats.termination = "converged";
            break;
        }
        if (gn < 0.99 * best_gn) {
            best_gn = gn;
            since_best = 0;
        } else if (++since_best > cfg.stall_window) {
            stats.termination = "stalled";
            break;
        }

        const RealField g = energy_gradient(model, phi);
        const RealField Pg = precondition(g);
        const RealField Pphi = precondition(phi);
        const double c = inner(Pg, phi) / inner(Pphi, phi);
        RealField dir = Pg;
        for (std::size_t i = 0; i < dir.size(); ++i) dir[i] -= c * Pphi[i];

        const double slack = 1e-14 * energy_scale(model, parts);
        bool ok = false;
        for (int bt = 0; bt < 60 && !ok; ++bt) {
            RealField trial = phi;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= tau * dir[i];
            normalize(trial);
            const EnergyParts tp = energy_parts(model, trial);
            const double Et = 0.5 * (tp.quartic - tp.second) - tp.nonlinear / (model.p() + 1.0);
            if (!std::isfinite(Et)) {
                tau *= 0.5;
                continue;
            }
            RealField tpg;
            double tgn = 0.0;
            bool accept = Et < E;
            if (!accept && Et <= E + slack) {
                // Energy is flat to rounding; accept only if the gradient improves.
                tpg = projected_gradient(trial);
                tgn = std::sqrt(norm_sq(tpg));
                accept = tgn < gn;
            }
            if (!accept) {
                tau *= 0.5;
                continue;
            }
            if (tpg.size() == 0) {
                tpg = projected_gradient(trial);
                tgn = std::sqrt(norm_sq(tpg));
            }
            const double rel_change = std::fabs(E - Et) / std::max(std::fabs(E), 1e-300);
            phi = std::move(trial);
            parts = tp;
            E = Et;
            pg = std::move(tpg);
            gn = tgn;
            stats.max_mass_drift = std::max(stats.max_mass_drift, std::fabs(norm_sq(phi) - lambda) / lambda);
            if (cfg.record_trace) stats.energy_trace.push_back(E);
            ok = true;
            if (rel_change > cfg.energy_stall_tol) since_best = 0;
            if (++accepted % 5 == 0) tau *= 1.25;
        }
        if (!ok) {
            stats.termination = "stalled";
            break;
        }
    }
    stats.iterations = it;
    stats.grad_norm = gn;

    if (regime == Regime::LargeLambdaOnly && parts.nonlinear < 1e-8 && E > -1e-8 && E <= 0.0) {
        std::ostringstream os;
        os << "minimizing sequence spreads to zero (||phi||_{p+1}^{p+1} = " << parts.nonlinear << ", I = " << E
           << "); lambda = " << lambda << " lies below the existence threshold";
        throw Error(ErrorKind::ZeroMinimizer, os.str());
    }
    if (!converged && stats.termination.empty()) {
        std::ostringstream os;
        os << "gradient flow did not reach grad_tol " << cfg.grad_tol << " in " << cfg.max_iters
           << " iterations (projected gradient " << gn << ")";
        throw Error(ErrorKind::NonConvergence, os.str());
    }
    if (cfg.center_after) phi = recenter(phi);
    Wave w = make_wave(model, std::move(phi), SolverKind::GradientFlow);
    w.stats = std::move(stats);
    return w;
}

Wave petviashvili(const ModelSpec& model, const GridPtr& grid, double omega, const SolveConfig& cfg) {
    cfg.validate();
    if (grid->dim() != model.dim()) throw Error(ErrorKind::GridMismatch, "grid dimension does not match the model");
    const double smin = min_grid_symbol(model, *grid, omega);
    if (!(smin > 0.0)) {
        std::ostringstream os;
        os << "Lambda(k) + omega has minimum " << smin << " on the grid; the fixed-point map needs it positive";
        throw Error(ErrorKind::SymbolNotPositive, os.str());
    }
    const double gamma = model.p() / (model.p() - 1.0);
    RealField phi = make_seed(grid, 1.0, cfg);
    {
        // Scale the seed so that the nonlinear term is of the right size.
        const double a = std::max(1e-3, std::sqrt(std::fabs(omega)) + 1.0);
        double mx = 0.0;
        for (double v : phi.values()) mx = std::max(mx, std::fabs(v));
        phi *= a / mx;
    }
    SolveStats stats;
    double S = 0.0, res = std::numeric_limits<double>::infinity();
    int it = 0;
    bool converged = false;
    for (; it < cfg.max_iters; ++it) {
        const RealField N = nonlinearity(model, phi);
        const double num = inner(apply_symbol(model, phi, omega), phi);
        const double den = inner(N, phi);
        if (!(den > 0.0) || !std::isfinite(num)) {
            stats.termination = "degenerate";
            break;
        }
        S = num / den;
        phi = apply_multiplier(N, [&](double k1, double k2) { return cplx(1.0 / (model.symbol(k1, k2) + omega), 0.0); });
        phi *= std::pow(S, gamma);
        require_finite(phi, "Petviashvili iterate");
        res = el_residual(model, phi, omega).l2;
        if (std::fabs(S - 1.0) < 1e-12 && res < cfg.grad_tol) {
            converged = true;
            stats.termination = "converged";
            ++it;
            break;
        }
    }
    stats.iterations = it;
    stats.grad_norm = res;
    if (!converged) {
        std::ostringstream os;
        os << "Petviashvili iteration stopped after " << it << " iterations with |S-1| = " << std::fabs(S - 1.0)
           << " and residual " << res;
        throw Error(ErrorKind::NonConvergence, os.str());
    }
    if (cfg.center_after) phi = recenter(phi);
    Wave w = make_wave(model, std::move(phi), SolverKind::Petviashvili);
    w.stats = std::move(stats);
    return w;
}

// ----------------------------------------------------------- scaling probe

ScalingExponents scaling_exponents(const ModelSpec& model, ScalingFamily family) {
    const double d = model.dim(), p = model.p();
    const bool mixed = std::holds_alternative<MixedNLS>(model.variant());
    if (family == ScalingFamily::Isotropic) return {4.0, 2.0, 0.5 * d * (p - 1.0)};
    // Smallest powers (leading as eps -> 0) for the anisotropic family.
    const double q = d == 1 ? 8.0 : 4.0;
    const double s = mixed || d == 1 ? 4.0 : 2.0;
    return {q, s, 0.5 * (d + 1.0) * (p - 1.0)};
}

double scaling_energy_closed_form(const ModelSpec& model, const RealField& f, double eps, ScalingFamily family) {
    return scaled_energy(model, scaled_terms(model, fourier_moments(model, f), eps, family));
}

std::vector<ScalingRow> scaling_probe(const ModelSpec& model, const RealField& f, const std::vector<double>& eps_list,
                                      ScalingFamily family) {
    if (f.grid().dim() != model.dim()) throw Error(ErrorKind::GridMismatch, "field dimension does not match the model");
    const SpectralGrid& g = f.grid();
    const int d = g.dim();
    const Moments mom = fourier_moments(model, f);
    const Spectrum s = spectrum(f);
    std::vector<cplx> coef(s.size());
    std::vector<double> k1(s.size()), k2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        coef[i] = s[i] * (g.multiplicity(i) / double(g.size()));
        k1[i] = g.k1(i);
        k2[i] = g.k2(i);
    }
    const double base_mass = norm_sq(f);

    std::vector<ScalingRow> rows;
    for (double e : eps_list) {
        if (!(e > 0.0)) throw Error(ErrorKind::InvalidArgument, "scaling parameters must be positive");
        const double s1 = family == ScalingFamily::Isotropic ? e : e * e;
        const double s2 = e;
        const double amp = std::pow(e, family == ScalingFamily::Isotropic ? 0.5 * d : 0.5 * (d + 1));

        // Sample points y = (s1 x1, s2 x2); outside the base box the profile is zero.
        // FFT phases are measured from the left edge of the box.
        const int n = g.n();
        std::vector<double> y1, y2;
        std::vector<int> id1, id2;
        for (int i = 0; i < n; ++i) {
            const double a = s1 * g.coordinate(0, i);
            if (std::fabs(a) < 0.5 * g.length(0)) {
                y1.push_back(a + 0.5 * g.length(0));
                id1.push_back(i);
            }
            if (d == 2) {
                const double b = s2 * g.coordinate(1, i);
                if (std::fabs(b) < 0.5 * g.length(1)) {
                    y2.push_back(b + 0.5 * g.length(1));
                    id2.push_back(i);
                }
            }
        }
        RealField fe(f.grid_ptr());
        if (d == 1) {
            std::vector<double> vals(y1.size());
            kernels::omp::fourier_eval(coef.data(), k1.data(), nullptr, coef.size(), y1.data(), nullptr, y1.size(),
                                       vals.data());
            for (std::size_t j = 0; j < id1.size(); ++j) fe[std::size_t(id1[j])] = amp * vals[j];
        } else {
            // Tensor-product points: sum over k2 first, then over k1.
            const std::size_t half = std::size_t(n) / 2 + 1;
            const std::size_t m2 = y2.size();
            std::vector<cplx> partial(std::size_t(n) * m2);
#pragma omp parallel for schedule(static)
            for (int r = 0; r < n; ++r)
                for (std::size_t j = 0; j < m2; ++j) {
                    cplx acc = 0.0;
                    for (std::size_t c = 0; c < half; ++c) {
                        const std::size_t sidx = std::size_t(r) * half + c;
                        acc += coef[sidx] * std::polar(1.0, k2[sidx] * y2[j]);
                    }
                    partial[std::size_t(r) * m2 + j] = acc;
                }
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(y1.size()); ++i)
                for (std::size_t j = 0; j < m2; ++j) {
                    cplx acc = 0.0;
                    for (int r = 0; r < n; ++r)
                        acc += partial[std::size_t(r) * m2 + j] * std::polar(1.0, k1[std::size_t(r) * half] * y1[i]);
                    fe[std::size_t(id1[i]) * n + std::size_t(id2[j])] = amp * acc.real();
                }
        }

        ScalingRow row;
        row.eps = e;
        const ScaledTerms t = scaled_terms(model, mom, e, family);
        row.closed_form = scaled_energy(model, t);
        row.spectral = energy(model, fe);
        const double lost = std::fabs(norm_sq(fe) - base_mass) / base_mass;
        row.resolved = spectral_tail_fraction(fe) < 1e-12 && lost < 1e-9;
        const double aq = 0.5 * std::fabs(t.quartic), as = 0.5 * std::fabs(t.second),
                     an = std::fabs(t.nonlinear) / (model.p() + 1.0);
        row.dominant = aq >= as && aq >= an ? "quartic" : (as >= an ? "second" : "nonlinear");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gsf
