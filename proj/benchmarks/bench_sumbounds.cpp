#include <benchmark/benchmark.h>

#include "sumbounds/latala.hpp"
#include "sumbounds/marginal.hpp"
#include "sumbounds/oracle.hpp"
#include "sumbounds/tails.hpp"

using namespace sumbounds;

namespace {

SummandSequence rademachers(long n) {
    return SummandSequence::iid(Marginal::rademacher(1.0), n);
}

void BM_latala_norm_discrete(benchmark::State& state) {
    const SummandSequence seq = rademachers(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(latala_norm(seq, 4.0).lambda_star);
}
BENCHMARK(BM_latala_norm_discrete)->Arg(4)->Arg(16)->Arg(64);

void BM_latala_norm_continuous(benchmark::State& state) {
    const SummandSequence seq = SummandSequence(
        {{Marginal::uniform_symmetric(1.0), 4}, {truncate(Marginal::exponential(1.0), 2.0), 4}});
    for (auto _ : state)
        benchmark::DoNotOptimize(latala_norm(seq, static_cast<double>(state.range(0))).lambda_star);
}
BENCHMARK(BM_latala_norm_continuous)->Arg(2)->Arg(8);

void BM_f_series(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(f_series(0.154));
}
BENCHMARK(BM_f_series);

void BM_exact_convolution(benchmark::State& state) {
    const SummandSequence seq = rademachers(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_sum_distribution(seq).atom_list().size());
}
BENCHMARK(BM_exact_convolution)->Arg(16)->Arg(64);

void BM_mc_tail(benchmark::State& state) {
    const SummandSequence seq = rademachers(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            mc_estimate(seq, Statistic::tail_at(4.0), state.range(0), 1, 4).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mc_tail)->Arg(100000)->Arg(1000000);

void BM_p_t_exact(benchmark::State& state) {
    const SummandSequence seq = rademachers(16);
    for (auto _ : state) {
        const NormOracle oracle = make_norm_oracle(seq, 4.0, OracleMode::Exact);
        benchmark::DoNotOptimize(p_t(seq, 4.0, oracle));
    }
}
BENCHMARK(BM_p_t_exact);

void BM_tail_report(benchmark::State& state) {
    const SummandSequence seq = rademachers(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(tail_bounds(seq, 4.0).lower_bound);
}
BENCHMARK(BM_tail_report);

} // namespace

BENCHMARK_MAIN();
