// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gsf/kernels.hpp"

namespace k = gsf::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (double& x : v) x = nd(rng);
    return v;
}

template <auto Fn>
void BM_power(benchmark::State& st) {
    const auto n = std::size_t(st.range(0));
    const auto f = random_vector(n, 1);
    std::vector<double> out(n);
    for (auto _ : st) {
        Fn(f.data(), out.data(), n, 2.5);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * std::int64_t(n));
}

template <auto Fn>
void BM_abs_pow_sum(benchmark::State& st) {
    const auto n = std::size_t(st.range(0));
    const auto f = random_vector(n, 2);
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.data(), n, 3.5));
    st.SetItemsProcessed(st.iterations() * std::int64_t(n));
}

template <auto Fn>
void BM_circulant(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto c = random_vector(std::size_t(n), 3);
    std::vector<double> out(std::size_t(n) * std::size_t(n));
    for (auto _ : st) {
        Fn(c.data(), 1, n, out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void BM_fourier_eval(benchmark::State& st) {
    const auto modes = std::size_t(st.range(0)), points = std::size_t(st.range(0));
    std::vector<std::complex<double>> coef(modes);
    const auto re = random_vector(modes, 4), k1 = random_vector(modes, 5), x1 = random_vector(points, 6);
    for (std::size_t i = 0; i < modes; ++i) coef[i] = {re[i], 0.5 * re[i]};
    std::vector<double> out(points);
    for (auto _ : st) {
        Fn(coef.data(), k1.data(), nullptr, modes, x1.data(), nullptr, points, out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_power<k::serial::power_nonlinearity>)->Name("power/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_power<k::omp::power_nonlinearity>)->Name("power/omp")->Range(1 << 12, 1 << 20)->UseRealTime();
BENCHMARK(BM_abs_pow_sum<k::serial::abs_pow_sum>)->Name("abs_pow_sum/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_abs_pow_sum<k::omp::abs_pow_sum>)->Name("abs_pow_sum/omp")->Range(1 << 12, 1 << 20)->UseRealTime();
BENCHMARK(BM_circulant<k::serial::circulant_assemble>)->Name("circulant/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_circulant<k::omp::circulant_assemble>)->Name("circulant/omp")->Arg(512)->Arg(2048)->UseRealTime();
BENCHMARK(BM_fourier_eval<k::serial::fourier_eval>)->Name("fourier_eval/serial")->Arg(1024)->Arg(4096);
BENCHMARK(BM_fourier_eval<k::omp::fourier_eval>)->Name("fourier_eval/omp")->Arg(1024)->Arg(4096)->UseRealTime();

BENCHMARK_MAIN();
