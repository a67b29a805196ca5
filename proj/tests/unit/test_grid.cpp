#include <cmath>
#include <random>

#include "doctest.h"
#include "gsf/errors.hpp"
#include "gsf/grid.hpp"

using namespace gsf;

namespace {

double sup_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

RealField random_field(const GridPtr& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    RealField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(rng);
    return f;
}

}  // namespace

TEST_CASE("second derivative of a sine is an eigenfunction") {
    const double L = 10.0;
    auto g = make_grid(1, 64, L);
    const double k = 2 * M_PI / L;
    auto f = RealField::from_function(g, [k](double x) { return std::sin(k * x); });
    auto expect = RealField::from_function(g, [k](double x) { return -k * k * std::sin(k * x); });
    CHECK(sup_diff(derivative(f, 2), expect) < 1e-12);
}

TEST_CASE("derivatives of a constant vanish") {
    auto g = make_grid(1, 64, 10.0);
    RealField f(g, std::vector<double>(64, 3.5));
    for (int order = 1; order <= 4; ++order) {
        const RealField d = derivative(f, order);
        for (double v : d.values()) CHECK(std::fabs(v) < 1e-13);
    }
}

TEST_CASE("fourth derivative of a Gaussian matches the analytic formula") {
    auto g = make_grid(1, 512, 80.0);
    auto f = RealField::from_function(g, [](double x) { return std::exp(-0.5 * x * x); });
    auto expect = RealField::from_function(
        g, [](double x) { return (x * x * x * x - 6 * x * x + 3) * std::exp(-0.5 * x * x); });
    CHECK(sup_diff(derivative(f, 4), expect) < 1e-10);
}

TEST_CASE("inner product of the constant one is the box length") {
    auto g = make_grid(1, 64, 10.0);
    RealField one(g, std::vector<double>(64, 1.0));
    CHECK(inner(one, one) == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("L2 norm of sech^2(x/sqrt 20) equals (4/3) sqrt 20") {
    auto g = make_grid(1, 1024, 120.0);
    auto f = RealField::from_function(g, [](double x) {
        const double s = 1.0 / std::cosh(x / std::sqrt(20.0));
        return s * s;
    });
    const double v = std::pow(lp_norm(f, 2.0), 2);
    CHECK(std::fabs(v - 4.0 / 3.0 * std::sqrt(20.0)) < 1e-9);
    CHECK(v == doctest::Approx(5.96285).epsilon(1e-6));
}

TEST_CASE("inner product is exactly symmetric") {
    auto g = make_grid(1, 256, 30.0);
    auto f = random_field(g, 1), h = random_field(g, 2);
    CHECK(inner(f, h) == inner(h, f));
}

TEST_CASE("Parseval identity for random fields") {
    for (int d : {1, 2}) {
        auto g = make_grid(d, 64, 17.0);
        auto f = random_field(g, 7 + d);
        const Spectrum s = spectrum(f);
        CHECK(std::fabs(g->parseval(s.data()) - norm_sq(f)) < 1e-12 * norm_sq(f));
    }
}

TEST_CASE("Fourier round trip reproduces samples") {
    auto g = make_grid(2, 64, 20.0);
    auto f = random_field(g, 3);
    const RealField back = from_spectrum(g, spectrum(f));
    CHECK(sup_diff(back, f) < 1e-12 * lp_norm(f, 2.0));
}

TEST_CASE("mixed partial derivatives commute in 2D") {
    auto g = make_grid(2, 64, 20.0);
    auto f = RealField::from_function(g, [](double x, double y) { return std::exp(-0.1 * (x * x + 2 * y * y)) * (1 + x * y); });
    const RealField a = derivative(derivative(f, {1, 0}), {0, 1});
    const RealField b = derivative(derivative(f, {0, 1}), {1, 0});
    double scale = 0.0;
    for (double v : a.values()) scale = std::max(scale, std::fabs(v));
    CHECK(sup_diff(a, b) <= 1e-13 * scale);
    CHECK(sup_diff(derivative(f, {1, 1}), a) < 1e-12 * scale);
}

TEST_CASE("periodic integration by parts") {
    auto g = make_grid(1, 256, 40.0);
    auto f = RealField::from_function(g, [](double x) { return std::exp(-0.05 * x * x) * std::cos(x); });
    auto h = RealField::from_function(g, [](double x) { return std::exp(-0.1 * (x - 1) * (x - 1)); });
    const double lhs = inner(derivative(f, 1), h), rhs = -inner(f, derivative(h, 1));
    CHECK(std::fabs(lhs - rhs) < 1e-10 * std::fabs(lhs));
}

TEST_CASE("odd derivatives drop the Nyquist mode") {
    const int n = 64;
    const double L = 10.0;
    auto g = make_grid(1, n, L);
    auto f = RealField::from_function(g, [&](double x) { return std::cos(M_PI * n / L * x); });
    const RealField d1 = derivative(f, 1), d3 = derivative(f, 3);
    for (double v : d1.values()) CHECK(std::fabs(v) < 1e-12);
    for (double v : d3.values()) CHECK(std::fabs(v) < 1e-10);
    // Even orders keep it.
    const RealField d2 = derivative(f, 2);
    CHECK(sup_diff(d2, -std::pow(M_PI * n / L, 2) * f) < 1e-9);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(1, 32, 10.0), Error);
    CHECK_THROWS_AS(make_grid(1, 96, 10.0), Error);
    CHECK_THROWS_AS(make_grid(3, 64, 10.0), Error);
    CHECK_THROWS_AS(make_grid(1, 64, -1.0), Error);
    auto g = make_grid(2, 64, 40.0);
    CHECK(g->quad_weight() == doctest::Approx(std::pow(40.0 / 64, 2)));
    CHECK(g->coordinate(0, 0) == -20.0);
    CHECK(g->coordinate(0, 32) == 0.0);
}

TEST_CASE("operation errors") {
    auto g1 = make_grid(1, 64, 10.0), g2 = make_grid(1, 128, 10.0);
    RealField a(g1), b(g2);
    CHECK_THROWS_AS(inner(a, b), Error);
    CHECK_THROWS_AS(lp_norm(a, 0.5), Error);
    CHECK_THROWS_AS(derivative(a, {3, 2}), Error);
    RealField c(g1);
    c[3] = std::nan("");
    try {
        derivative(c, 1);
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
}

TEST_CASE("recenter moves the peak to the box centre") {
    auto g = make_grid(1, 128, 20.0);
    auto f = RealField::from_function(g, [](double x) { return std::exp(-(x - 4.0) * (x - 4.0)); });
    const RealField r = recenter(f);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] > r[arg]) arg = i;
    CHECK(arg == 64);
    CHECK(norm_sq(r) == doctest::Approx(norm_sq(f)).epsilon(1e-14));
    CHECK(sup_diff(roll(roll(f, 5), -5), f) == 0.0);
}

TEST_CASE("two-thirds filter removes the top third of the spectrum") {
    auto g = make_grid(1, 64, 2 * M_PI);
    auto low = RealField::from_function(g, [](double x) { return std::cos(3 * x); });
    auto high = RealField::from_function(g, [](double x) { return std::cos(30 * x); });
    CHECK(sup_diff(two_thirds_filter(low), low) < 1e-13);
    CHECK(norm_sq(two_thirds_filter(high)) < 1e-24);
    CHECK(spectral_tail_fraction(low) < 1e-20);
    CHECK(spectral_tail_fraction(high) > 0.99);
}
