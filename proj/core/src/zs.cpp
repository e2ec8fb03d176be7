#include "equilibra/zs.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace eq {

namespace {

Mask attract(const Adj& succ, const Mask& own, const Mask& target, const Mask& within, std::vector<int>* strat)
{
    int n = (int)succ.size();
    auto in = [&](int v) { return within.empty() || within[v]; };
    Adj pred(n);
    std::vector<int> deg(n, 0);
    for (int u = 0; u < n; ++u) {
        if (!in(u))
            continue;
        for (int w : succ[u])
            if (in(w)) {
                pred[w].push_back(u);
                ++deg[u];
            }
    }
    Mask res(n, 0);
    std::vector<int> todo;
    for (int v = 0; v < n; ++v)
        if (in(v) && target[v]) {
            res[v] = 1;
            todo.push_back(v);
        }
    std::vector<int> left = deg;
    while (!todo.empty()) {
        int w = todo.back();
        todo.pop_back();
        for (int u : pred[w]) {
            if (res[u])
                continue;
            if (own[u]) {
                res[u] = 1;
                if (strat)
                    (*strat)[u] = w;
                todo.push_back(u);
            } else if (--left[u] == 0) {
                res[u] = 1;
                todo.push_back(u);
            }
        }
    }
    return res;
}

}

Mask attractor(const Adj& succ, const Mask& mine, const Mask& target, const Mask& within)
{
    return attract(succ, mine, target, within, nullptr);
}

Mask attractor(const Adj& succ, const Mask& mine, const Mask& target, const Mask& within,
               std::vector<int>& strategy)
{
    return attract(succ, mine, target, within, &strategy);
}

Mask attractor(const Game& g, const std::vector<int>& coalition, const Mask& target)
{
    Adj succ(g.n());
    Mask mine(g.n(), 0);
    for (int v = 0; v < g.n(); ++v) {
        succ[v] = g.succ(v);
        mine[v] = std::find(coalition.begin(), coalition.end(), g.owner[v]) != coalition.end();
    }
    return attractor(succ, mine, target);
}

// ---------------------------------------------------------------- mean cycles

std::optional<MeanCycle> min_mean_cycle(int n, const std::vector<WEdge>& edges, const std::vector<int>& from)
{
    Adj adj(n);
    for (const auto& e : edges)
        adj[e.from].push_back(e.to);
    Mask live = from.empty() ? full_mask(n) : reachable(adj, from);
    std::vector<const WEdge*> es;
    for (const auto& e : edges)
        if (live[e.from] && live[e.to])
            es.push_back(&e);
    int m = count(live);
    if (m == 0)
        return std::nullopt;
    // D[k][v]: least weight of a walk of exactly k edges ending in v
    std::vector<std::vector<std::optional<Q>>> D(m + 1, std::vector<std::optional<Q>>(n));
    for (int v = 0; v < n; ++v)
        if (live[v])
            D[0][v] = Q(0);
    for (int k = 1; k <= m; ++k)
        for (const WEdge* e : es) {
            if (!D[k - 1][e->from])
                continue;
            Q c = *D[k - 1][e->from] + e->w;
            auto& d = D[k][e->to];
            if (!d || c < *d)
                d = c;
        }
    std::optional<Q> best;
    for (int v = 0; v < n; ++v) {
        if (!D[m][v])
            continue;
        std::optional<Q> worst;
        for (int k = 0; k < m; ++k) {
            if (!D[k][v])
                continue;
            Q r = (*D[m][v] - *D[k][v]) / Q(m - k);
            if (!worst || r > *worst)
                worst = r;
        }
        if (worst && (!best || *worst < *best))
            best = worst;
    }
    if (!best)
        return std::nullopt;

    // Edges tight for the potentials of w - best carry exactly the optimal cycles.
    std::vector<Q> pot(n, Q(0));
    for (int it = 0; it < m; ++it)
        for (const WEdge* e : es) {
            Q c = pot[e->from] + e->w - *best;
            if (c < pot[e->to])
                pot[e->to] = c;
        }
    Adj tight(n);
    for (const WEdge* e : es)
        if (pot[e->from] + e->w - *best == pot[e->to])
            tight[e->from].push_back(e->to);
    for (auto& t : tight)
        std::sort(t.begin(), t.end());
    int k = 0;
    auto comp = scc(tight, live, k);
    auto parts = nontrivial_sccs(tight, live);
    std::vector<int> cyc;
    int start = -1;
    for (const auto& p : parts)
        if (start < 0 || p[0] < start)
            start = *std::min_element(p.begin(), p.end());
    std::vector<int> pos(n, -1);
    int v = start;
    while (pos[v] < 0) {
        pos[v] = (int)cyc.size();
        cyc.push_back(v);
        for (int w : tight[v])
            if (comp[w] == comp[start]) {
                v = w;
                break;
            }
    }
    std::vector<int> c(cyc.begin() + pos[v], cyc.end());
    return MeanCycle{*best, least_rotation(c)};
}

std::optional<MeanCycle> max_mean_cycle(int n, const std::vector<WEdge>& edges, const std::vector<int>& from)
{
    std::vector<WEdge> neg = edges;
    for (auto& e : neg)
        e.w = -e.w;
    auto r = min_mean_cycle(n, neg, from);
    if (r)
        r->value = -r->value;
    return r;
}

MeanCycle min_mean_cycle(const Game& g, int player)
{
    std::vector<WEdge> es;
    for (const auto& e : g.edges)
        es.push_back({e.from, e.to, e.reward.at(player)});
    auto r = min_mean_cycle(g.n(), es);
    if (!r)
        throw GameError("graph has no cycle");
    return *r;
}

// ---------------------------------------------------------------- parity

namespace {

struct Zielonka {
    const Adj& succ;
    const Mask& mine;
    const std::vector<int>& color;
    std::vector<int>& strat;

    void solve(const Mask& V, Mask& W0, Mask& W1)
    {
        int n = (int)succ.size();
        W0.assign(n, 0);
        W1.assign(n, 0);
        int d = std::numeric_limits<int>::max();
        for (int v = 0; v < n; ++v)
            if (V[v])
                d = std::min(d, color[v]);
        if (d == std::numeric_limits<int>::max())
            return;
        int p = d % 2;
        Mask ownP(n, 0), ownO(n, 0);
        for (int v = 0; v < n; ++v) {
            ownP[v] = (mine[v] != 0) == (p == 0);
            ownO[v] = !ownP[v];
        }
        Mask top(n, 0);
        for (int v = 0; v < n; ++v)
            if (V[v] && color[v] == d) {
                top[v] = 1;
                if (ownP[v])
                    for (int w : succ[v])
                        if (V[w]) {
                            strat[v] = w;
                            break;
                        }
            }
        Mask A = attract(succ, ownP, top, V, &strat);
        Mask sub(n, 0);
        for (int v = 0; v < n; ++v)
            sub[v] = V[v] && !A[v];
        Mask S0, S1;
        solve(sub, S0, S1);
        Mask& opp = p == 0 ? S1 : S0;
        if (count(opp) == 0) {
            (p == 0 ? W0 : W1) = V;
            return;
        }
        Mask B = attract(succ, ownO, opp, V, &strat);
        Mask rest(n, 0);
        for (int v = 0; v < n; ++v)
            rest[v] = V[v] && !B[v];
        Mask R0, R1;
        solve(rest, R0, R1);
        Mask& wp = p == 0 ? W0 : W1;
        Mask& wo = p == 0 ? W1 : W0;
        wp = p == 0 ? R0 : R1;
        wo = p == 0 ? R1 : R0;
        for (int v = 0; v < n; ++v)
            if (B[v])
                wo[v] = 1;
    }
};

}

ParityResult solve_parity(const Adj& succ, const Mask& mine, const std::vector<int>& color)
{
    int n = (int)succ.size();
    ParityResult r;
    r.strategy.assign(n, -1);
    Zielonka z{succ, mine, color, r.strategy};
    Mask W1;
    z.solve(full_mask(n), r.win, W1);
    return r;
}

ParityResult parity_region(const Game& g, const std::vector<int>& coalition, int player)
{
    Adj succ(g.n());
    Mask mine(g.n(), 0);
    std::vector<int> col(g.n());
    for (int v = 0; v < g.n(); ++v) {
        succ[v] = g.succ(v);
        mine[v] = std::find(coalition.begin(), coalition.end(), g.owner[v]) != coalition.end();
        col[v] = g.color[v][player];
    }
    return solve_parity(succ, mine, col);
}

std::vector<int> parity_values(const Game& g, int player)
{
    auto r = parity_region(g, {player}, player);
    return std::vector<int>(r.win.begin(), r.win.end());
}

// ---------------------------------------------------------------- generalized parity

namespace {

struct GenParity {
    const Adj& succ;
    const Mask& mine;
    const std::vector<std::vector<int>>& colors;
    Mask other;

    static Mask minus(const Mask& a, const Mask& b)
    {
        Mask r(a.size(), 0);
        for (std::size_t v = 0; v < a.size(); ++v)
            r[v] = a[v] && !b[v];
        return r;
    }

    // returns the region won by `mine` inside V
    Mask solve(const Mask& V)
    {
        int n = (int)succ.size();
        if (count(V) == 0)
            return Mask(n, 0);
        std::vector<int> low(colors.size(), std::numeric_limits<int>::max());
        for (std::size_t d = 0; d < colors.size(); ++d)
            for (int v = 0; v < n; ++v)
                if (V[v])
                    low[d] = std::min(low[d], colors[d][v]);
        for (std::size_t d = 0; d < colors.size(); ++d) {
            if (low[d] % 2)
                continue;
            Mask top(n, 0);
            for (int v = 0; v < n; ++v)
                top[v] = V[v] && colors[d][v] == low[d];
            Mask A = attract(succ, mine, top, V, nullptr);
            Mask Wm = solve(minus(V, A));
            Mask Wo = minus(minus(V, A), Wm);
            if (count(Wo) == 0)
                return V;
            Mask B = attract(succ, other, Wo, V, nullptr);
            return solve(minus(V, B));
        }
        for (std::size_t d = 0; d < colors.size(); ++d) {
            Mask top(n, 0);
            for (int v = 0; v < n; ++v)
                top[v] = V[v] && colors[d][v] == low[d];
            Mask A = attract(succ, other, top, V, nullptr);
            Mask Wm = solve(minus(V, A));
            if (count(Wm) == 0)
                continue;
            Mask B = attract(succ, mine, Wm, V, nullptr);
            Mask rest = solve(minus(V, B));
            for (int v = 0; v < n; ++v)
                rest[v] |= B[v];
            return rest;
        }
        return Mask(n, 0);
    }
};

}

Mask solve_generalized_parity(const Adj& succ, const Mask& mine, const std::vector<std::vector<int>>& colors)
{
    int n = (int)succ.size();
    if (colors.empty())
        return Mask(n, 0);
    GenParity gp{succ, mine, colors, Mask(n, 0)};
    for (int v = 0; v < n; ++v)
        gp.other[v] = !mine[v];
    return gp.solve(full_mask(n));
}

// ---------------------------------------------------------------- mean-payoff values

namespace {

// value of the one-player game where every vertex picks in `choice` (sets of successors);
// minimize = true: least reachable cycle mean, else greatest
std::vector<Q> one_player_mp(const Game& g, int player, const std::vector<std::vector<int>>& allowed, bool minimize)
{
    int n = g.n();
    Adj adj(n);
    std::vector<WEdge> es;
    for (int u = 0; u < n; ++u)
        for (int w : allowed[u]) {
            adj[u].push_back(w);
            es.push_back({u, w, g.edges[g.edge(u, w)].reward[player]});
        }
    int k = 0;
    auto comp = scc(adj, {}, k);
    std::vector<std::optional<Q>> best(k);
    for (const auto& part : nontrivial_sccs(adj, {})) {
        Mask in(n, 0);
        for (int v : part)
            in[v] = 1;
        std::vector<WEdge> local;
        for (const auto& e : es)
            if (in[e.from] && in[e.to])
                local.push_back(e);
        auto r = minimize ? min_mean_cycle(n, local, part) : max_mean_cycle(n, local, part);
        best[comp[part[0]]] = r->value;
    }
    // components are numbered in reverse topological order: successors first
    std::vector<std::vector<int>> members(k);
    for (int v = 0; v < n; ++v)
        members[comp[v]].push_back(v);
    for (int c = 0; c < k; ++c)
        for (int v : members[c])
            for (int w : adj[v]) {
                int d = comp[w];
                if (d == c || !best[d])
                    continue;
                if (!best[c] || (minimize ? *best[d] < *best[c] : *best[d] > *best[c]))
                    best[c] = best[d];
            }
    std::vector<Q> val(n);
    for (int v = 0; v < n; ++v)
        val[v] = *best[comp[v]];
    return val;
}

}

std::vector<Q> mp_values(const Game& g, int player)
{
    int n = g.n();
    for (int v = 0; v < n; ++v)
        if (!g.controlled(v))
            throw GameError("mean-payoff values need a game without chance or terminal vertices");
    double mine_prod = 1, opp_prod = 1;
    for (int v = 0; v < n; ++v)
        (g.owner[v] == player ? mine_prod : opp_prod) *= (double)g.out[v].size();
    bool enum_mine = mine_prod <= opp_prod;
    if (std::min(mine_prod, opp_prod) > 2e6)
        throw GameError("mean-payoff value computation too large");
    std::vector<int> choosers;
    for (int v = 0; v < n; ++v)
        if ((g.owner[v] == player) == enum_mine)
            choosers.push_back(v);
    std::vector<std::vector<int>> allowed(n);
    for (int v = 0; v < n; ++v)
        allowed[v] = g.succ(v);
    std::optional<std::vector<Q>> res;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == choosers.size()) {
            auto val = one_player_mp(g, player, allowed, enum_mine);
            if (!res) {
                res = val;
                return;
            }
            for (int v = 0; v < n; ++v)
                if (enum_mine ? val[v] > (*res)[v] : val[v] < (*res)[v])
                    (*res)[v] = val[v];
            return;
        }
        int v = choosers[k];
        for (int w : g.succ(v)) {
            allowed[v] = {w};
            rec(k + 1);
        }
        allowed[v] = g.succ(v);
    };
    rec(0);
    return *res;
}

std::vector<ExtRat> adversarial_values(const Game& g)
{
    std::vector<ExtRat> r(g.n(), ExtRat::neg_inf());
    for (int i = 0; i < g.p(); ++i) {
        if (g.mode == Mode::parity) {
            auto val = parity_values(g, i);
            for (int v = 0; v < g.n(); ++v)
                if (g.owner[v] == i)
                    r[v] = ExtRat(val[v]);
        } else if (g.mode == Mode::mean_payoff) {
            auto val = mp_values(g, i);
            for (int v = 0; v < g.n(); ++v)
                if (g.owner[v] == i)
                    r[v] = ExtRat(val[v]);
        } else {
            throw GameError(std::string("adversarial values not available in mode ") + mode_name(g.mode));
        }
    }
    return r;
}

// ---------------------------------------------------------------- stochastic

EdgeSet all_edges(const Game& g) { return EdgeSet(g.edges.size(), 1); }

static Adj f_succ(const Game& g, const EdgeSet& F)
{
    Adj s(g.n());
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (F[e])
            s[g.edges[e].from].push_back(g.edges[e].to);
    return s;
}

Mask positive_prob_attractor(const Game& g, const Mask& W, const EdgeSet& F)
{
    Adj s = f_succ(g, F);
    for (int v = 0; v < g.n(); ++v)
        if (g.owner[v] != TERMINAL && s[v].empty())
            throw GameError("edge set leaves vertex " + g.names[v] + " without successor");
    Mask chance(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
        chance[v] = g.owner[v] == CHANCE;
    return attractor(s, chance, W);
}

std::vector<char> roles_for(const Game& g, int player)
{
    std::vector<char> r(g.n(), OPP);
    for (int v = 0; v < g.n(); ++v) {
        if (g.owner[v] == CHANCE)
            r[v] = RANDOM;
        else if (g.owner[v] == player)
            r[v] = MINE;
    }
    return r;
}

Mask positive_reach(const Game& g, const std::vector<char>& role, const Mask& target, const EdgeSet& F)
{
    Adj s = f_succ(g, F);
    Mask mine(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
        mine[v] = role[v] != OPP;
    return attractor(s, mine, target);
}

Mask almost_sure_reach(const Game& g, const std::vector<char>& role, const Mask& target, const EdgeSet& F)
{
    int n = g.n();
    Adj s = f_succ(g, F);
    Mask fwd(n, 0), bwd(n, 0);
    for (int v = 0; v < n; ++v) {
        fwd[v] = role[v] != OPP;
        bwd[v] = role[v] != MINE;
    }
    Mask U = full_mask(n);
    for (;;) {
        Mask t(n, 0);
        for (int v = 0; v < n; ++v)
            t[v] = U[v] && target[v];
        Mask Z = attractor(s, fwd, t, U);
        Mask bad(n, 0);
        for (int v = 0; v < n; ++v)
            bad[v] = !Z[v];
        Mask L = attractor(s, bwd, bad);
        Mask nu(n, 0);
        for (int v = 0; v < n; ++v)
            nu[v] = !L[v];
        if (nu == U)
            return U;
        U = nu;
    }
}

std::vector<Q> extreme_values(const Game& g, const Partition& part, int i, const EdgeSet& F)
{
    int n = g.n();
    std::set<Q> cand{Q(0)};
    for (int v = 0; v < n; ++v)
        if (g.owner[v] == TERMINAL)
            cand.insert(g.payoff[v][i]);
    auto role = roles_for(g, i);
    auto swapped = role;
    for (auto& r : swapped)
        if (r != RANDOM)
            r = r == MINE ? OPP : MINE;
    bool pess = part.pessimist.at(i);
    std::vector<std::optional<Q>> val(n);
    for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
        const Q& x = *it;
        Mask good(n, 0), bad(n, 0);
        for (int v = 0; v < n; ++v)
            if (g.owner[v] == TERMINAL) {
                good[v] = g.payoff[v][i] >= x;
                bad[v] = g.payoff[v][i] < x;
            }
        Mask win(n, 0);
        if (pess && x > 0) {
            win = almost_sure_reach(g, role, good, F);
        } else if (pess) {
            Mask lose = positive_reach(g, swapped, bad, F);
            for (int v = 0; v < n; ++v)
                win[v] = !lose[v];
        } else if (x > 0) {
            win = positive_reach(g, role, good, F);
        } else {
            Mask lose = almost_sure_reach(g, swapped, bad, F);
            for (int v = 0; v < n; ++v)
                win[v] = !lose[v];
        }
        for (int v = 0; v < n; ++v)
            if (win[v] && !val[v])
                val[v] = x;
    }
    std::vector<Q> r(n);
    for (int v = 0; v < n; ++v)
        r[v] = *val[v];
    return r;
}

Q extreme_adversarial_value(const Game& g, const Partition& part, int v)
{
    if (!g.controlled(v))
        throw GameError("vertex " + g.names[v] + " is not controlled by a player");
    return extreme_values(g, part, g.owner[v], all_edges(g))[v];
}

}
