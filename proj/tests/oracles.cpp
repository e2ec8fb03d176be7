#include "oracles.hpp"

#include "equilibra/chain.hpp"
#include "equilibra/nego.hpp"
#include "equilibra/risk.hpp"

#include <algorithm>
#include <map>

namespace oracle {

using namespace eq;

Game corpus(const std::string& name) { return load_game(std::string(EQ_CORPUS_DIR) + "/" + name + ".json"); }

Memory corpus_memory(const Game& g, const std::string& name)
{
    return load_memory(g, std::string(EQ_CORPUS_DIR) + "/" + name + ".json");
}

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

void ensure_indegree(Rng& rng, Game& g, const std::vector<int>& sources)
{
    for (int v = 0; v < g.n(); ++v) {
        if (v == g.init)
            continue;
        bool has = false;
        for (auto& e : g.edges)
            has = has || e.to == v;
        if (has)
            continue;
        for (int tries = 0; tries < 50; ++tries) {
            int u = sources[pick(rng, 0, (int)sources.size() - 1)];
            if (!g.has_edge(u, v)) {
                g.add_edge(u, v);
                break;
            }
        }
    }
}

}

Game random_game(Rng& rng, Mode mode, int n, int p, int maxdeg, int maxcolor, std::vector<int> rewards)
{
    Game g;
    g.mode = mode;
    for (int i = 0; i < p; ++i)
        g.players.push_back("p" + std::to_string(i));
    for (int v = 0; v < n; ++v)
        g.add_vertex("v" + std::to_string(v), pick(rng, 0, p - 1));
    g.init = 0;
    std::vector<int> all;
    for (int v = 0; v < n; ++v)
        all.push_back(v);
    for (int v = 0; v < n; ++v) {
        int d = pick(rng, 1, std::min(maxdeg, n));
        for (int k = 0; k < d; ++k) {
            int w = pick(rng, 0, n - 1);
            if (!g.has_edge(v, w))
                g.add_edge(v, w);
        }
    }
    ensure_indegree(rng, g, all);
    for (auto& e : g.edges)
        if (g.weighted())
            for (int i = 0; i < p; ++i)
                e.reward[i] = rewards[pick(rng, 0, (int)rewards.size() - 1)];
    if (mode == Mode::parity)
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < p; ++i)
                g.color[v][i] = pick(rng, 0, maxcolor);
    g.validate();
    return g;
}

Game random_terminal_game(Rng& rng, int p, const TerminalShape& s)
{
    Game g;
    g.mode = Mode::terminal;
    for (int i = 0; i < p; ++i)
        g.players.push_back("p" + std::to_string(i));
    int nc = s.controlled, nr = s.chance, nt = s.terminals;
    for (int v = 0; v < nc; ++v)
        g.add_vertex("v" + std::to_string(v), pick(rng, 0, p - 1));
    for (int v = 0; v < nr; ++v)
        g.add_vertex("r" + std::to_string(v), CHANCE);
    for (int v = 0; v < nt; ++v) {
        int t = g.add_vertex("t" + std::to_string(v), TERMINAL);
        g.payoff[t].resize(p);
        for (int i = 0; i < p; ++i)
            g.payoff[t][i] = pick(rng, s.minpay, s.maxpay);
    }
    g.init = 0;
    int n = g.n();
    std::vector<int> sources;
    for (int v = 0; v < nc + nr; ++v)
        sources.push_back(v);
    for (int v : sources) {
        int d = pick(rng, 1, 2);
        for (int k = 0; k < d; ++k) {
            int w = pick(rng, 0, n - 1);
            if (!g.has_edge(v, w))
                g.add_edge(v, w);
        }
    }
    ensure_indegree(rng, g, sources);
    for (int v = nc; v < nc + nr; ++v)
        for (int e : g.out[v])
            g.edges[e].prob = Q(1, (unsigned long)g.out[v].size());
    g.validate();
    return g;
}

std::vector<Choice> positional_choices(const Game& g, const std::vector<int>& players, const EdgeSet& F)
{
    std::vector<Choice> r{Choice(g.n(), -1)};
    for (int v = 0; v < g.n(); ++v) {
        if (!g.controlled(v) || std::find(players.begin(), players.end(), g.owner[v]) == players.end())
            continue;
        std::vector<Choice> next;
        for (const auto& c : r)
            for (int e : g.out[v]) {
                if (!F.empty() && !F[e])
                    continue;
                next.push_back(c);
                next.back()[v] = g.edges[e].to;
            }
        r = std::move(next);
    }
    return r;
}

Memory positional_memory(const Game& g, const Choice& c)
{
    Memory m;
    m.states = {"q"};
    for (int i = 0; i < g.p(); ++i)
        m.owners.push_back(i);
    for (int v = 0; v < g.n(); ++v) {
        if (g.owner[v] == TERMINAL)
            continue;
        m.trans.push_back(MemTransition{0, v, 0, g.controlled(v) ? c[v] : -1, Q(0), false});
    }
    return m;
}

Lasso follow(const Game& g, const Choice& c, int v)
{
    std::vector<int> seq;
    std::map<int, int> at;
    while (!at.count(v)) {
        at[v] = (int)seq.size();
        seq.push_back(v);
        v = c[v];
    }
    Lasso l;
    l.prefix.assign(seq.begin(), seq.begin() + at[v]);
    l.cycle.assign(seq.begin() + at[v], seq.end());
    return l;
}

std::vector<ExtRat> brute_values(const Game& g, int i)
{
    std::vector<int> others;
    for (int j = 0; j < g.p(); ++j)
        if (j != i)
            others.push_back(j);
    auto mine = positional_choices(g, {i});
    auto theirs = positional_choices(g, others);
    std::vector<ExtRat> best(g.n(), ExtRat::neg_inf());
    for (const auto& a : mine) {
        std::vector<ExtRat> worst(g.n(), ExtRat::pos_inf());
        for (const auto& b : theirs) {
            Choice c(g.n(), -1);
            for (int v = 0; v < g.n(); ++v)
                c[v] = g.owner[v] == i ? a[v] : b[v];
            for (int v = 0; v < g.n(); ++v)
                worst[v] = eq::min(worst[v], eval_lasso(g, follow(g, c, v), i));
        }
        for (int v = 0; v < g.n(); ++v)
            best[v] = eq::max(best[v], worst[v]);
    }
    return best;
}

bool brute_ne_outcome(const Game& g, const Lasso& l)
{
    auto pay = eval_lasso(g, l);
    std::vector<std::vector<ExtRat>> val(g.p());
    for (int i = 0; i < g.p(); ++i)
        val[i] = brute_values(g, i);
    std::vector<int> seq = l.prefix;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    for (int v : seq)
        if (val[g.owner[v]][v] > pay[g.owner[v]])
            return false;
    return true;
}

namespace {

std::vector<std::vector<int>> emits_of(const Game& g, const Memory& m)
{
    std::vector<std::vector<int>> r(g.n());
    for (const auto& t : m.trans)
        if (t.emit >= 0)
            r[t.reads].push_back(t.emit);
    return r;
}

}

bool brute_xrse_stationary(const Game& g, const Partition& part, const Memory& profile)
{
    if (profile.size() != 1)
        throw GameError("oracle needs a stationary profile");
    auto cur = extreme_measure(g, part, profile);
    auto em = emits_of(g, profile);
    for (int i = 0; i < g.p(); ++i) {
        for (const auto& c : positional_choices(g, {i})) {
            Memory m;
            m.states = {"q"};
            for (int j = 0; j < g.p(); ++j)
                m.owners.push_back(j);
            for (int v = 0; v < g.n(); ++v) {
                if (g.owner[v] == TERMINAL)
                    continue;
                if (!g.controlled(v))
                    m.trans.push_back(MemTransition{0, v, 0, -1, Q(0), false});
                else if (g.owner[v] == i)
                    m.trans.push_back(MemTransition{0, v, 0, c[v], Q(0), false});
                else
                    for (int w : em[v])
                        m.trans.push_back(MemTransition{0, v, 0, w, Q(0), false});
            }
            if (extreme_measure(g, part, m)[i] > cur[i])
                return false;
        }
    }
    return true;
}

bool brute_energy_ne(const Game& g, const Choice& profile)
{
    Lasso out = follow(g, profile, g.init);
    for (int i = 0; i < g.p(); ++i) {
        if (eval_lasso(g, out, i) == ExtRat(1))
            continue;
        for (const auto& c : positional_choices(g, {i})) {
            Choice mix = profile;
            for (int v = 0; v < g.n(); ++v)
                if (g.owner[v] == i)
                    mix[v] = c[v];
            if (eval_lasso(g, follow(g, mix, g.init), i) == ExtRat(1))
                return false;
        }
    }
    return true;
}

std::vector<EdgeSet> edge_subsets(const Game& g)
{
    std::vector<EdgeSet> r{EdgeSet(g.edges.size(), 0)};
    for (int v = 0; v < g.n(); ++v) {
        if (g.owner[v] == TERMINAL)
            continue;
        const auto& out = g.out[v];
        int k = (int)out.size();
        std::vector<EdgeSet> next;
        for (const auto& F : r) {
            if (!g.controlled(v)) {
                next.push_back(F);
                for (int e : out)
                    next.back()[e] = 1;
                continue;
            }
            for (int mask = 1; mask < (1 << k); ++mask) {
                next.push_back(F);
                for (int j = 0; j < k; ++j)
                    next.back()[out[j]] = mask >> j & 1;
            }
        }
        r = std::move(next);
    }
    return r;
}

bool brute_constrained_optimists(const Game& g, const Thresholds& t)
{
    Partition part = all_optimists(g);
    bool friendly = std::all_of(t.upper.begin(), t.upper.end(), [](const ExtRat& y) { return y >= ExtRat(0); });
    for (const auto& F : edge_subsets(g)) {
        Memory m = friendly ? friendly_profile(g, part, F) : averse_profile(g, part, F);
        auto x = extreme_measure(g, part, m);
        if (!within(t, std::vector<ExtRat>(x.begin(), x.end())))
            continue;
        if (verify_xrse(g, part, m))
            return true;
    }
    return false;
}

}

namespace oracle {

using namespace eq;

Memory random_stationary(Rng& rng, const Game& g)
{
    EdgeSet F = all_edges(g);
    for (int v = 0; v < g.n(); ++v) {
        if (!g.controlled(v))
            continue;
        int k = (int)g.out[v].size();
        int mask = pick(rng, 1, (1 << k) - 1);
        for (int j = 0; j < k; ++j)
            F[g.out[v][j]] = mask >> j & 1;
    }
    return stationary_profile(g, F);
}

Agreement nego_monotone_runs(int count, unsigned seed)
{
    Rng rng(seed);
    const std::vector<ExtRat> pool = {ExtRat::neg_inf(), ExtRat(0), ExtRat(1)};
    Agreement r;
    for (int it = 0; it < count; ++it) {
        Game g = random_game(rng, Mode::parity, pick(rng, 2, 4), 2);
        Requirement a(g.n()), b(g.n());
        for (int v = 0; v < g.n(); ++v) {
            int x = pick(rng, 0, 2);
            a[v] = pool[x];
            b[v] = pool[pick(rng, x, 2)];
        }
        auto na = nego(g, a), nb = nego(g, b);
        ++r.trials;
        for (int v = 0; v < g.n(); ++v)
            if (!(a[v] <= na[v] && b[v] <= nb[v] && na[v] <= nb[v])) {
                r.fail("game " + std::to_string(it) + " at " + g.names[v]);
                break;
            }
    }
    return r;
}

Agreement ne_outcome_runs(int count, unsigned seed)
{
    Rng rng(seed);
    Agreement r;
    for (int it = 0; it < count; ++it) {
        Mode mode = it % 2 ? Mode::mean_payoff : Mode::parity;
        Game g = random_game(rng, mode, pick(rng, 2, 4), 2);
        for (const auto& l : simple_lassos(g, g.init)) {
            ++r.trials;
            bool brute = brute_ne_outcome(g, l);
            r.positives += brute;
            if (ne_outcome_check(g, l) != brute)
                r.fail("game " + std::to_string(it) + " lasso " + lasso_str(g, l));
        }
    }
    return r;
}

Agreement xrse_verifier_runs(int count, unsigned seed)
{
    Rng rng(seed);
    Agreement r;
    for (int it = 0; it < count; ++it) {
        TerminalShape s;
        s.controlled = pick(rng, 1, 3);
        s.chance = pick(rng, 0, 1);
        s.terminals = 5 - s.controlled - s.chance;
        int p = pick(rng, 1, 2);
        Game g = random_terminal_game(rng, p, s);
        Partition part;
        for (int i = 0; i < p; ++i)
            part.pessimist.push_back((char)pick(rng, 0, 1));
        Memory m = random_stationary(rng, g);
        ++r.trials;
        bool brute = brute_xrse_stationary(g, part, m);
        r.positives += brute;
        if (verify_xrse(g, part, m) != brute)
            r.fail("game " + std::to_string(it));
    }
    return r;
}

Agreement constrained_optimist_runs(int count, unsigned seed, bool signed_payoffs)
{
    Rng rng(seed);
    Agreement r;
    for (int it = 0; it < count; ++it) {
        TerminalShape s;
        s.controlled = pick(rng, 2, 3);
        s.chance = pick(rng, 0, 1);
        s.terminals = 2;
        if (signed_payoffs) {
            s.minpay = -3;
            s.maxpay = -1;
        }
        int p = pick(rng, 1, 2);
        Game g = random_terminal_game(rng, p, s);
        Thresholds t = open_thresholds(g);
        for (int i = 0; i < p; ++i) {
            int lo = pick(rng, s.minpay - 1, s.maxpay), hi = pick(rng, lo, s.maxpay);
            if (!signed_payoffs)
                lo = std::max(lo, 0);
            t.lower[i] = ExtRat(lo);
            t.upper[i] = ExtRat(std::max(lo, hi));
        }
        ++r.trials;
        auto run = xrse_constrained_optimists(g, all_optimists(g), t);
        bool brute = brute_constrained_optimists(g, t);
        r.positives += brute;
        if ((run.answer == Answer::yes) != brute) {
            r.fail("game " + std::to_string(it));
            continue;
        }
        if (run.answer == Answer::yes) {
            Memory m = run.friendly ? friendly_profile(g, all_optimists(g), run.F)
                                    : averse_profile(g, all_optimists(g), run.F);
            auto x = extreme_measure(g, all_optimists(g), m);
            if (!verify_xrse(g, all_optimists(g), m) || !within(t, std::vector<ExtRat>(x.begin(), x.end())))
                r.fail("game " + std::to_string(it) + " witness");
        }
    }
    return r;
}

Agreement energy_runs(int count, unsigned seed)
{
    Rng rng(seed);
    Agreement r;
    for (int it = 0; it < count; ++it) {
        Game g = random_game(rng, Mode::energy, pick(rng, 2, 4), 2);
        auto all = positional_choices(g, {0, 1});
        for (int k = 0; k < 3; ++k) {
            const Choice& c = all[pick(rng, 0, (int)all.size() - 1)];
            ++r.trials;
            bool brute = brute_energy_ne(g, c);
            r.positives += brute;
            if (verify_ne_energy(g, positional_memory(g, c)) != brute)
                r.fail("game " + std::to_string(it) + " profile " + lasso_str(g, follow(g, c, g.init)));
        }
    }
    return r;
}

}
