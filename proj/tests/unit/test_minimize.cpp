#include <cmath>

#include "doctest.h"
#include "gsf/errors.hpp"
#include "gsf/minimize.hpp"

using namespace gsf;

namespace {

double l2_error(const RealField& a, const RealField& b) { return std::sqrt(norm_sq(a - b)); }

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("gradient flow at lambda = 4/sqrt 5 recovers the explicit soliton") {
    auto g = make_grid(1, 1024, 120.0);
    const ModelSpec m(MixedNLS{-1, 1.0, 3.0, 1});
    const Wave w = normalized_gradient_flow(m, g, explicit_soliton_lambda(), SolveConfig{});
    CHECK(w.omega >= 0.159);
    CHECK(w.omega <= 0.161);
    CHECK(l2_error(recenter(w.field), explicit_soliton(g)) < 1e-4);
    CHECK(w.solver == SolverKind::GradientFlow);
}

TEST_CASE("Kawahara b=1, p=2, lambda=1: negative energy and omega above b^2/4") {
    auto g = make_grid(1, 512, 80.0);
    const Wave w = normalized_gradient_flow(ModelSpec(Kawahara{1.0, 2.0}), g, 1.0, SolveConfig{});
    CHECK(w.energy < 0.0);
    CHECK(w.omega > 0.25);
}

TEST_CASE("accepted iterates decrease the energy and keep the mass") {
    auto g = make_grid(1, 512, 80.0);
    SolveConfig cfg;
    cfg.record_trace = true;
    const Wave w = normalized_gradient_flow(ModelSpec(Kawahara{1.0, 2.0}), g, 2.0, cfg);
    REQUIRE(w.stats.energy_trace.size() >= 2);
    for (std::size_t i = 1; i < w.stats.energy_trace.size(); ++i) {
        const double prev = w.stats.energy_trace[i - 1];
        // Accepted steps lower the energy, up to the documented roundoff band.
        CHECK(w.stats.energy_trace[i] <= prev + 1e-14 * std::max(1.0, std::fabs(prev)));
    }
    CHECK(w.stats.max_mass_drift < 1e-12);
    CHECK(std::fabs(norm_sq(w.field) - 2.0) < 1e-12 * 2.0);
}

TEST_CASE("unbounded regime: refused unless forced, then collapse") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec m(Kawahara{-1.0, 10.0});
    CHECK(kind_of([&] { normalized_gradient_flow(m, g, 1.0, SolveConfig{}); }) == ErrorKind::RegimeRefusal);
    SolveConfig cfg;
    cfg.force = true;
    CHECK(kind_of([&] { normalized_gradient_flow(m, g, 1.0, cfg); }) == ErrorKind::Collapse);
}

TEST_CASE("large-lambda-only regime below threshold reports a zero minimizer") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec m(Kawahara{-1.0, 6.0});
    REQUIRE(validity_regime(m, 0.05) == Regime::LargeLambdaOnly);
    CHECK(kind_of([&] { normalized_gradient_flow(m, g, 0.05, SolveConfig{}); }) == ErrorKind::ZeroMinimizer);
}

TEST_CASE("iteration budget exhaustion is a convergence failure") {
    auto g = make_grid(1, 512, 80.0);
    SolveConfig cfg;
    cfg.max_iters = 3;
    CHECK(kind_of([&] { normalized_gradient_flow(ModelSpec(Kawahara{1.0, 2.0}), g, 1.0, cfg); }) ==
          ErrorKind::NonConvergence);
}

TEST_CASE("solve configuration validation") {
    SolveConfig c;
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SolveConfig{};
    c.grad_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SolveConfig{};
    c.seed_profile = SeedProfile::FromFile;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(seed_from_string("sech2") == SeedProfile::Sech2);
    CHECK_THROWS_AS(seed_from_string("nope"), Error);
}

TEST_CASE("seeds are normalized to the target mass") {
    auto g = make_grid(1, 256, 40.0);
    for (SeedProfile s : {SeedProfile::Gaussian, SeedProfile::Sech2}) {
        SolveConfig c;
        c.seed_profile = s;
        CHECK(norm_sq(make_seed(g, 3.0, c)) == doctest::Approx(3.0).epsilon(1e-14));
    }
}

TEST_CASE("Petviashvili at omega = 0.16 reproduces the explicit soliton") {
    auto g = make_grid(1, 1024, 120.0);
    const ModelSpec m(MixedNLS{-1, 1.0, 3.0, 1});
    const Wave w = petviashvili(m, g, kExplicitSolitonOmega, SolveConfig{});
    CHECK(l2_error(recenter(w.field), explicit_soliton(g)) < 1e-6);
    CHECK(std::fabs(w.lambda - 4.0 / std::sqrt(5.0)) < 1e-6);
    CHECK(w.solver == SolverKind::Petviashvili);
}

TEST_CASE("Petviashvili self-consistency and symbol precondition") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec m(Kawahara{1.0, 2.0});
    const Wave w = petviashvili(m, g, 0.5, SolveConfig{});
    CHECK(std::fabs(omega_from_field(m, w.field) - 0.5) < 1e-8);
    CHECK(kind_of([&] { petviashvili(m, g, 0.2, SolveConfig{}); }) == ErrorKind::SymbolNotPositive);
}

TEST_CASE("gradient flow at the Petviashvili mass is no worse than the Petviashvili wave") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec m(Kawahara{1.0, 2.0});
    const Wave p = petviashvili(m, g, 0.5, SolveConfig{});
    const Wave f = normalized_gradient_flow(m, g, p.lambda, SolveConfig{});
    CHECK(f.energy <= p.energy + 1e-6 * std::fabs(p.energy));
}

TEST_CASE("recentering leaves the invariants unchanged") {
    auto g = make_grid(1, 512, 80.0);
    const ModelSpec m(Kawahara{1.0, 2.0});
    SolveConfig cfg;
    cfg.center_after = false;
    const Wave w = normalized_gradient_flow(m, g, 1.5, cfg);
    const RealField r = recenter(w.field);
    CHECK(std::fabs(energy(m, r) - w.energy) < 1e-10 * std::fabs(w.energy));
    CHECK(std::fabs(norm_sq(r) - w.lambda) < 1e-10 * w.lambda);
    CHECK(std::fabs(omega_from_field(m, r) - w.omega) < 1e-10 * std::fabs(w.omega));
}

TEST_CASE("scaling probe: closed form agrees with spectral evaluation") {
    auto g = make_grid(1, 4096, 400.0);
    const ModelSpec m(Kawahara{1.0, 3.0});
    const RealField f = RealField::from_function(g, [](double x) { return std::exp(-0.5 * x * x); });
    const auto rows = scaling_probe(m, f, {0.25, 0.5, 2.0, 4.0});
    REQUIRE(rows.size() == 4);
    for (const ScalingRow& r : rows) {
        CAPTURE(r.eps);
        CHECK(r.resolved);
        CHECK(std::fabs(r.closed_form - r.spectral) < 1e-9 * std::fabs(r.closed_form));
    }
}

TEST_CASE("scaling probe regimes") {
    auto g = make_grid(1, 1024, 80.0);
    const RealField f = RealField::from_function(g, [](double x) { return std::exp(-0.5 * x * x); });
    // p = 3: the nonlinear term wins as eps -> 0, so I < 0 for small eps.
    const auto small = scaling_probe(ModelSpec(Kawahara{-1.0, 3.0}), f, {1e-3, 1e-2});
    CHECK(small[0].closed_form < 0.0);
    CHECK(small[1].closed_form < 0.0);
    CHECK(small[0].dominant == "nonlinear");
    // p = 10: large eps drives the energy to -infinity.
    const RealField f2 = 2.0 * f;
    const auto big = scaling_probe(ModelSpec(Kawahara{-1.0, 10.0}), f2, {4.0, 8.0});
    CHECK(big[0].closed_form < 0.0);
    CHECK(big[1].closed_form < big[0].closed_form);
    // Exponents of the isotropic and anisotropic families.
    const ScalingExponents iso = scaling_exponents(ModelSpec(MixedNLS{-1, 1.0, 3.0, 2}), ScalingFamily::Isotropic);
    CHECK(iso.quartic == 4.0);
    CHECK(iso.second == 2.0);
    CHECK(iso.nonlinear == 2.0);
    const ScalingExponents an = scaling_exponents(ModelSpec(MixedNLS{-1, 1.0, 3.0, 2}), ScalingFamily::Anisotropic);
    CHECK(an.nonlinear == 3.0);
}

TEST_CASE("anisotropic scaling closed form in 2D") {
    auto g = make_grid(2, 256, 40.0);
    const ModelSpec m(MixedNLS{1, 1.0, 3.0, 2});
    const RealField f =
        RealField::from_function(g, [](double x, double y) { return std::exp(-0.5 * (x * x + 2 * y * y)); });
    const auto rows = scaling_probe(m, f, {0.75, 1.25}, ScalingFamily::Anisotropic);
    for (const ScalingRow& r : rows) {
        CAPTURE(r.eps);
        CHECK(std::fabs(r.closed_form - r.spectral) < 1e-9 * std::fabs(r.closed_form));
    }
}
