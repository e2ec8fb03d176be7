#include "equilibra/equilibria.hpp"
#include "equilibra/io.hpp"
#include "equilibra/nego.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace eq;

static Game corpus(const char* name) { return load_game(std::string(EQ_CORPUS_DIR) + "/" + name + ".json"); }

// ring of n vertices with one chord per vertex, alternating owners
static Game ring(int n, Mode mode)
{
    std::mt19937 rng(n);
    Game g;
    g.mode = mode;
    g.players = {"p0", "p1"};
    for (int v = 0; v < n; ++v)
        g.add_vertex("v" + std::to_string(v), v % 2);
    g.init = 0;
    for (int v = 0; v < n; ++v) {
        g.add_edge(v, (v + 1) % n);
        int w = (int)(rng() % n);
        if (!g.has_edge(v, w))
            g.add_edge(v, w);
    }
    for (auto& e : g.edges)
        for (auto& r : e.reward)
            r = (int)(rng() % 5) - 2;
    if (mode == Mode::parity)
        for (auto& c : g.color)
            for (auto& x : c)
                x = (int)(rng() % 4);
    g.validate();
    return g;
}

static void BM_nego_iterate_sans_spe(benchmark::State& st)
{
    auto g = corpus("sans_spe");
    for (auto _ : st)
        benchmark::DoNotOptimize(nego_iterate(g, 8));
}
BENCHMARK(BM_nego_iterate_sans_spe);

static void BM_nego_parity_ring(benchmark::State& st)
{
    auto g = ring((int)st.range(0), Mode::parity);
    for (auto _ : st)
        benchmark::DoNotOptimize(nego_iterate(g, 16));
}
BENCHMARK(BM_nego_parity_ring)->Arg(4)->Arg(6)->Arg(8);

static void BM_nego_mp_ring(benchmark::State& st)
{
    auto g = ring((int)st.range(0), Mode::mean_payoff);
    for (auto _ : st)
        benchmark::DoNotOptimize(nego(g, vacuous_requirement(g)));
}
BENCHMARK(BM_nego_mp_ring)->Arg(3)->Arg(4)->Arg(5);

static void BM_spe_exists_inf_spe(benchmark::State& st)
{
    auto g = corpus("inf_spe");
    auto t = open_thresholds(g);
    for (auto _ : st)
        benchmark::DoNotOptimize(spe_exists_mp(g, Q(0), t));
}
BENCHMARK(BM_spe_exists_inf_spe);

static void BM_eps_min_sans_spe(benchmark::State& st)
{
    auto g = corpus("sans_spe");
    for (auto _ : st)
        benchmark::DoNotOptimize(epsilon_min_search(g));
}
BENCHMARK(BM_eps_min_sans_spe);

BENCHMARK_MAIN();
