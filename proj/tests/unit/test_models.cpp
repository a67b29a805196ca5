#include <cmath>
#include <random>

#include "doctest.h"
#include "gsf/errors.hpp"
#include "gsf/minimize.hpp"
#include "gsf/models.hpp"

using namespace gsf;

namespace {

const double kS = std::sqrt(20.0);
const double kA = std::sqrt(0.3);

GridPtr soliton_grid() { return make_grid(1, 1024, 120.0); }

double sup(const RealField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

RealField smooth_random(const GridPtr& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const double c1 = nd(rng), c2 = nd(rng), c3 = nd(rng);
    if (g->dim() == 1)
        return RealField::from_function(g, [=](double x) {
            return std::exp(-0.05 * x * x) * (c1 + c2 * std::sin(0.4 * x) + c3 * std::cos(0.7 * x));
        });
    return RealField::from_function(g, [=](double x, double y) {
        return std::exp(-0.05 * (x * x + y * y)) * (c1 + c2 * std::sin(0.4 * x) + c3 * std::cos(0.7 * y));
    });
}

}  // namespace

TEST_CASE("zero field: energy, gradient and residual vanish") {
    auto g = make_grid(1, 128, 40.0);
    RealField z(g);
    const ModelSpec m(Kawahara{1.0, 3.0});
    CHECK(energy(m, z) == 0.0);
    const RealField gz = energy_gradient(m, z);
    for (double v : gz.values()) CHECK(v == 0.0);
    const ResidualNorms r = el_residual(m, z, 0.7);
    CHECK(r.sup == 0.0);
    CHECK(r.l2 == 0.0);
    CHECK_THROWS_AS(omega_from_field(m, z), Error);
}

TEST_CASE("energy of the explicit soliton matches the closed-form sech integrals") {
    // Phi = a sech^2(x/s):
    //   int Phi''^2 = 64 a^2 / (21 s^3), int Phi'^2 = 16 a^2 / (15 s), int Phi^4 = 32 a^4 s / 35.
    const double A = 64.0 * kA * kA / (21.0 * kS * kS * kS);
    const double P = 16.0 * kA * kA / (15.0 * kS);
    const double C = 32.0 * std::pow(kA, 4) * kS / 35.0;
    const double expect = 0.5 * (A + P) - 0.25 * C;  // b = -1
    const ModelSpec m(Kawahara{-1.0, 3.0});
    const double e = energy(m, explicit_soliton(soliton_grid()));
    CHECK(std::fabs(e - expect) < 1e-9 * std::fabs(expect));

    const EnergyParts parts = energy_parts(m, explicit_soliton(soliton_grid()));
    CHECK(parts.quartic == doctest::Approx(A).epsilon(1e-9));
    CHECK(parts.second == doctest::Approx(-P).epsilon(1e-9));  // b int Phi'^2
    CHECK(parts.nonlinear == doctest::Approx(C).epsilon(1e-9));
}

TEST_CASE("central-difference check of the energy gradient has order two") {
    auto g = make_grid(1, 256, 40.0);
    const ModelSpec m(Kawahara{1.0, 3.0});
    const RealField f = smooth_random(g, 11);
    const RealField dir = smooth_random(g, 12);
    const double exact = inner(energy_gradient(m, f), dir);
    auto err = [&](double h) {
        const double fd = (energy(m, f + h * dir) - energy(m, f - h * dir)) / (2 * h);
        return std::fabs(fd - exact);
    };
    const double e3 = err(1e-3), e4 = err(1e-4);
    const double order = std::log10(e3 / e4);
    CHECK(order >= 1.9);
}

TEST_CASE("gradient at the explicit soliton is -omega phi") {
    const ModelSpec m(MixedNLS{-1, 1.0, 3.0, 1});
    const RealField phi = explicit_soliton(soliton_grid());
    const RealField g = energy_gradient(m, phi);
    CHECK(sup(g + kExplicitSolitonOmega * phi) < 1e-8);
}

TEST_CASE("EL residual of the explicit soliton") {
    const RealField phi = explicit_soliton(soliton_grid());
    for (const ModelSpec& m : {ModelSpec(MixedNLS{-1, 1.0, 3.0, 1}), ModelSpec(Kawahara{-1.0, 3.0})}) {
        CHECK(el_residual(m, phi, 0.16).sup < 1e-8);
        // Off the isolated value the residual is (omega - 4/25) Phi exactly.
        CHECK(el_residual(m, phi, 0.2).sup == doctest::Approx(0.04 * kA).epsilon(1e-6));
        CHECK(el_residual(m, phi, 0.2).sup == doctest::Approx(0.0219089023).epsilon(1e-7));
    }
}

TEST_CASE("omega from the field") {
    const ModelSpec m(MixedNLS{-1, 1.0, 3.0, 1});
    CHECK(std::fabs(omega_from_field(m, explicit_soliton(soliton_grid())) - 0.16) < 1e-9);

    auto g = make_grid(1, 256, 40.0);
    const ModelSpec k(Kawahara{0.7, 3.0});
    const RealField f = smooth_random(g, 5);
    const double w = omega_from_field(k, f);
    const double r = inner(el_residual_field(k, f, w), f);
    CHECK(std::fabs(r) < 1e-10 * (std::fabs(quadratic_form(k, f)) + lp_sum(f, 4.0)));

    // omega(c f) = (c^{p-1} ||f||_{p+1}^{p+1} - <Lambda f, f>) / ||f||^2
    const double c = 1.7;
    const double expect = (std::pow(c, 2.0) * lp_sum(f, 4.0) - quadratic_form(k, f)) / norm_sq(f);
    CHECK(std::fabs(omega_from_field(k, c * f) - expect) < 1e-12 * std::fabs(expect));
}

TEST_CASE("gradient pairing identity") {
    for (int d : {1, 2}) {
        auto g = make_grid(d, d == 1 ? 256 : 64, d == 1 ? 40.0 : 30.0);
        const ModelSpec m = d == 1 ? ModelSpec(Kawahara{1.0, 2.5}) : ModelSpec(LaplacianNLS{-1.0, 2.0, 2});
        const RealField f = smooth_random(g, 20 + d);
        const double lhs = inner(energy_gradient(m, f), f);
        const double rhs = quadratic_form(m, f) - lp_sum(f, m.p() + 1);
        CHECK(std::fabs(lhs - rhs) < 1e-10 * (std::fabs(quadratic_form(m, f)) + lp_sum(f, m.p() + 1)));
    }
}

TEST_CASE("symbols and floors") {
    const ModelSpec kp(Kawahara{1.0, 2.0}), kn(Kawahara{-1.0, 2.0});
    const ModelSpec mp(MixedNLS{1, 2.0, 2.0, 2}), mn(MixedNLS{-1, 2.0, 2.0, 2});
    const ModelSpec lp(LaplacianNLS{3.0, 2.0, 2});
    CHECK(kp.symbol(2.0) == 16.0 - 4.0);
    CHECK(mp.symbol(1.0, 1.0) == 4.0 - 4.0);
    CHECK(mn.symbol(1.0, 1.0) == 4.0 + 4.0);
    CHECK(lp.symbol(1.0, 1.0) == 4.0 - 6.0);
    CHECK(kp.symbol_floor() == -0.25);
    CHECK(kn.symbol_floor() == 0.0);
    CHECK(mp.symbol_floor() == -4.0);
    CHECK(mn.symbol_floor() == 0.0);
    CHECK(lp.symbol_floor() == -2.25);
    // The floor is the infimum over a dense wavenumber scan.
    for (const ModelSpec& m : {kp, kn, mp, mn, lp}) {
        double lo = 1e300;
        for (double a = -3; a <= 3; a += 1e-3) lo = std::min(lo, m.dim() == 1 ? m.symbol(a) : m.symbol(a, 0.0));
        CHECK(lo == doctest::Approx(m.symbol_floor()).epsilon(1e-5));
    }
}

TEST_CASE("symbol positivity on the grid tracks omega > b^2/4") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec kp(Kawahara{1.0, 2.0}), kn(Kawahara{-1.0, 2.0});
    CHECK(min_grid_symbol(kp, *g, 0.26) > 0.0);
    CHECK(min_grid_symbol(kp, *g, 0.24) <= 0.0);
    CHECK(min_grid_symbol(kn, *g, 0.01) > 0.0);
    CHECK(min_grid_symbol(kn, *g, -0.01) <= 0.0);
}

TEST_CASE("validity regime matrix") {
    using R = Regime;
    struct Case {
        ModelSpec m;
        R expect;
    };
    const Case cases[] = {
        {ModelSpec(Kawahara{1.0, 3.0}), R::WellPosedAllLambda},
        {ModelSpec(Kawahara{-1.0, 4.99}), R::WellPosedAllLambda},
        {ModelSpec(Kawahara{1.0, 5.0}), R::LargeLambdaOnly},
        {ModelSpec(Kawahara{1.0, 8.9}), R::LargeLambdaOnly},
        {ModelSpec(Kawahara{1.0, 9.0}), R::EnergyUnboundedBelow},
        {ModelSpec(Kawahara{-1.0, 10.0}), R::EnergyUnboundedBelow},
        {ModelSpec(MixedNLS{-1, 1.0, 3.0, 1}), R::WellPosedAllLambda},
        {ModelSpec(MixedNLS{-1, 1.0, 4.0, 2}), R::LargeLambdaOnly},
        {ModelSpec(MixedNLS{1, 1.0, 5.0, 2}), R::EnergyUnboundedBelow},
        {ModelSpec(LaplacianNLS{-1.0, 2.0, 2}), R::WellPosedAllLambda},
        {ModelSpec(LaplacianNLS{-1.0, 4.0, 2}), R::LargeLambdaOnly},
        {ModelSpec(LaplacianNLS{1.0, 9.5, 1}), R::EnergyUnboundedBelow},
    };
    for (const Case& c : cases) {
        CAPTURE(c.m.tag());
        CHECK(validity_regime(c.m, 1.0) == c.expect);
    }
    CHECK(regime_thresholds(ModelSpec(MixedNLS{-1, 1.0, 3.0, 2})).first == doctest::Approx(1.0 + 8.0 / 3.0));
    CHECK(at_regime_threshold(ModelSpec(Kawahara{1.0, 5.0})));
    CHECK_FALSE(at_regime_threshold(ModelSpec(Kawahara{1.0, 3.0})));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(ModelSpec(Kawahara{1.0, 1.0}), Error);
    CHECK_THROWS_AS(ModelSpec(MixedNLS{0, 1.0, 3.0, 1}), Error);
    CHECK_THROWS_AS(ModelSpec(MixedNLS{-1, -1.0, 3.0, 1}), Error);
    CHECK_THROWS_AS(ModelSpec(LaplacianNLS{1.0, 3.0, 3}), Error);
    auto g2 = make_grid(2, 64, 20.0);
    CHECK_THROWS_AS(energy(ModelSpec(Kawahara{}), RealField(g2)), Error);
}

TEST_CASE("wave construction records consistent diagnostics") {
    const ModelSpec m(Kawahara{-1.0, 3.0});
    const RealField phi = explicit_soliton(soliton_grid());
    const Wave w = make_wave(m, phi, SolverKind::Imported);
    CHECK(std::fabs(w.lambda - norm_sq(phi)) < 1e-10 * w.lambda);
    CHECK(w.lambda == doctest::Approx(explicit_soliton_lambda()).epsilon(1e-12));
    CHECK(w.omega == doctest::Approx(0.16).epsilon(1e-9));
    CHECK(w.energy == energy(m, phi));
    CHECK(w.el_residual_sup == el_residual(m, phi, w.omega).sup);
}
