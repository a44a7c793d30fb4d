#include "manss/builder.hpp"
#include "manss/cobar.hpp"
#include "manss/exact_linalg.hpp"
#include "manss/verify.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace manss;

static void BM_RowReduce(benchmark::State& state)
{
    const auto n = static_cast<std::uint32_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::vector<linalg::Triplet> entries;
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c)
            if (rng() % 8 == 0)
                entries.push_back({r, c, static_cast<linalg::Residue>(1 + rng() % 2)});
    const linalg::FlMatrix m(n, n, 3, entries);
    for (auto _ : state)
        benchmark::DoNotOptimize(linalg::row_reduce(m));
}
BENCHMARK(BM_RowReduce)->Arg(64)->Arg(256)->Arg(512);

static void BM_CotorE(benchmark::State& state)
{
    for (auto _ : state) {
        steenrod::DualSteenrod alg(steenrod::GroundRing(steenrod::Base::C, 3));
        const cobar::CotorRange range{.s_max = 3, .t_max = static_cast<int>(state.range(0)), .workers = 1};
        benchmark::DoNotOptimize(cobar::cotor(steenrod::Algebra::E, cobar::ComoduleSpec::trivial(), range, alg));
    }
}
BENCHMARK(BM_CotorE)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_CotorA(benchmark::State& state)
{
    for (auto _ : state) {
        steenrod::DualSteenrod alg(steenrod::GroundRing(steenrod::Base::C, 3));
        const cobar::CotorRange range{.s_max = 3, .t_max = 16, .workers = static_cast<unsigned>(state.range(0))};
        benchmark::DoNotOptimize(cobar::cotor(steenrod::Algebra::A, cobar::ComoduleSpec::trivial(), range, alg));
    }
}
BENCHMARK(BM_CotorA)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PropagateCore(benchmark::State& state)
{
    const auto c = chart::load_classical(std::string(MANSS_FIXTURE_DIR) + "/l3-core.chart");
    for (auto _ : state)
        benchmark::DoNotOptimize(builder::run(c, chart::Base::C));
}
BENCHMARK(BM_PropagateCore);

static void BM_OracleRandom(benchmark::State& state)
{
    const auto c = verify::random_chart(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify::oracle_equivalence(c, chart::Base::C, "bench"));
}
BENCHMARK(BM_OracleRandom)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
