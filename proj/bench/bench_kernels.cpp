// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "kuramoto/feasibility.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/harness.hpp"
#include "kuramoto/kernels.hpp"
#include "kuramoto/reference.hpp"

namespace {

using namespace kuramoto;

Graph dense_circulant(std::size_t n)
{
    std::vector<std::size_t> offsets;
    for (std::size_t s = 1; s <= n / 3; ++s) offsets.push_back(s);
    return circulant(n, offsets);
}

std::vector<double> phases(std::size_t n)
{
    const auto s = random_state(n, 7, 0);
    return {s.theta().begin(), s.theta().end()};
}

void BM_rhs_pairwise_serial(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    std::vector<double> out(n);
    for (auto _ : st) {
        reference::pairwise_rhs(g, th, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_rhs_pairwise_parallel(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    std::vector<double> out(n);
    for (auto _ : st) {
        kernels::pairwise_rhs(g, th, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_rhs_factored_serial(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    std::vector<double> out(n);
    for (auto _ : st) benchmark::DoNotOptimize(reference::factored_rhs(g, th, out));
}

void BM_rhs_factored_parallel(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    std::vector<double> out(n);
    kernels::FactoredWorkspace ws;
    for (auto _ : st) benchmark::DoNotOptimize(kernels::factored_rhs(g, th, out, ws));
}

void BM_jacobian_serial(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    for (auto _ : st) benchmark::DoNotOptimize(reference::jacobian(g, th).data());
}

void BM_jacobian_parallel(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto g = dense_circulant(n);
    const auto th = phases(n);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::jacobian(g, th).data());
}

void BM_feasibility_serial(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(reference::feasibility_scan(0.7495, 2e-3).components.size());
}

void BM_feasibility_parallel(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(feasibility_scan(0.7495, 2e-3).components.size());
}

} // namespace

BENCHMARK(BM_rhs_pairwise_serial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_rhs_pairwise_parallel)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_rhs_factored_serial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_rhs_factored_parallel)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_jacobian_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_jacobian_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_feasibility_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_feasibility_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
