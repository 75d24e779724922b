#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "fracground/kernels.hpp"

namespace {

using fracground::kernels::Backend;

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

std::vector<std::complex<double>> random_complex(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = {dist(rng), dist(rng)};
    return v;
}

Backend backend_for(const benchmark::State& state) {
    return state.range(1) == 0 ? Backend::serial : Backend::openmp;
}

void apply_backend_counters(benchmark::State& state, std::size_t n) {
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}

void BM_abs_pow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    fracground::kernels::set_backend(backend_for(state));
    const std::vector<double> in = random_vector(n, 1);
    std::vector<double> out(n);
    for (auto _ : state) {
        fracground::kernels::abs_pow(in.data(), out.data(), n, 2.5);
        benchmark::DoNotOptimize(out.data());
    }
    apply_backend_counters(state, n);
}

void BM_lincomb(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    fracground::kernels::set_backend(backend_for(state));
    const std::vector<double> x = random_vector(n, 2);
    const std::vector<double> y = random_vector(n, 3);
    std::vector<double> out(n);
    for (auto _ : state) {
        fracground::kernels::lincomb(1.25, x.data(), -0.5, y.data(), out.data(), n);
        benchmark::DoNotOptimize(out.data());
    }
    apply_backend_counters(state, n);
}

void BM_sum_abs_pow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    fracground::kernels::set_backend(backend_for(state));
    const std::vector<double> x = random_vector(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fracground::kernels::sum_abs_pow(x.data(), n, 3.5));
    }
    apply_backend_counters(state, n);
}

void BM_dot(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    fracground::kernels::set_backend(backend_for(state));
    const std::vector<double> x = random_vector(n, 5);
    const std::vector<double> y = random_vector(n, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fracground::kernels::dot(x.data(), y.data(), n));
    }
    apply_backend_counters(state, n);
}

void BM_apply_real_symbol(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    fracground::kernels::set_backend(backend_for(state));
    std::vector<std::complex<double>> coeffs = random_complex(n, 7);
    const std::vector<double> symbol = random_vector(n, 8);
    for (auto _ : state) {
        fracground::kernels::apply_real_symbol(coeffs.data(), symbol.data(), n);
        benchmark::DoNotOptimize(coeffs.data());
    }
    apply_backend_counters(state, n);
}

void add_args(benchmark::internal::Benchmark* b) {
    for (const int64_t n : {int64_t{1} << 12, int64_t{1} << 16, int64_t{1} << 20}) {
        b->Args({n, 0})->Args({n, 1});
    }
    b->ArgNames({"n", "omp"});
}

BENCHMARK(BM_abs_pow)->Apply(add_args);
BENCHMARK(BM_lincomb)->Apply(add_args);
BENCHMARK(BM_sum_abs_pow)->Apply(add_args);
BENCHMARK(BM_dot)->Apply(add_args);
BENCHMARK(BM_apply_real_symbol)->Apply(add_args);

}  // namespace

BENCHMARK_MAIN();
