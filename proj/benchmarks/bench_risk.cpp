#include "equilibra/io.hpp"
#include "equilibra/risk.hpp"

#include <benchmark/benchmark.h>

using namespace eq;

static Game corpus(const char* name) { return load_game(std::string(EQ_CORPUS_DIR) + "/" + name + ".json"); }

static Thresholds exact(const Game& g, int x)
{
    Thresholds t = open_thresholds(g);
    for (int i = 0; i < g.p(); ++i)
        t.lower[i] = t.upper[i] = ExtRat(x);
    return t;
}

static void BM_xrse_exists(benchmark::State& st)
{
    auto g = corpus("ex_extreme3");
    for (auto _ : st)
        benchmark::DoNotOptimize(xrse_exists(g, all_pessimists(g)));
}
BENCHMARK(BM_xrse_exists);

static void BM_xrse_constrained(benchmark::State& st)
{
    auto g = corpus("ex_extreme3");
    auto t = exact(g, 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(xrse_constrained_optimists(g, all_optimists(g), t));
}
BENCHMARK(BM_xrse_constrained);

static void BM_xrse_search(benchmark::State& st)
{
    auto g = corpus(st.range(0) == 2 ? "ex_extreme2" : "ex_extreme3");
    auto t = exact(g, 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(xrse_search_bounded(g, all_pessimists(g), t, 2));
}
BENCHMARK(BM_xrse_search)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_entropic(benchmark::State& st)
{
    auto g = corpus("lottery");
    auto m = stationary_profile(g, all_edges(g));
    EntropicParams p;
    p.rho = {Q(-50)};
    p.digits = (unsigned)st.range(0);
    for (auto _ : st)
        benchmark::DoNotOptimize(entropic_measure(g, p, m, 0));
}
BENCHMARK(BM_entropic)->Arg(38)->Arg(100);

static void BM_verify_xrse_witness(benchmark::State& st)
{
    auto g = corpus("ex_extreme2");
    auto m = load_memory(g, std::string(EQ_CORPUS_DIR) + "/ex_extreme2_witness.json");
    for (auto _ : st)
        benchmark::DoNotOptimize(verify_xrse(g, all_pessimists(g), m));
}
BENCHMARK(BM_verify_xrse_witness);

BENCHMARK_MAIN();
