#include "equilibra/risk.hpp"
#include "equilibra/chain.hpp"
#include "equilibra/graph.hpp"
#include "equilibra/product.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace eq {

namespace {

void need_terminal(const Game& g)
{
    if (g.mode != Mode::terminal)
        throw GameError("risk measures need a game in terminal mode");
}

Adj f_adj(const Game& g, const EdgeSet& F)
{
    Adj s(g.n());
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (F[e])
            s[g.edges[e].from].push_back(g.edges[e].to);
    return s;
}

Mask terminals(const Game& g)
{
    Mask t(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
        t[v] = g.owner[v] == TERMINAL;
    return t;
}

Mask complement(const Mask& m)
{
    Mask r(m.size());
    for (std::size_t v = 0; v < m.size(); ++v)
        r[v] = !m[v];
    return r;
}

// vertices from which a terminal is accessible in F
Mask coreach_terminals(const Game& g, const EdgeSet& F)
{
    Adj r(g.n());
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (F[e])
            r[g.edges[e].to].push_back(g.edges[e].from);
    std::vector<int> ts;
    for (int v = 0; v < g.n(); ++v)
        if (g.owner[v] == TERMINAL)
            ts.push_back(v);
    return reachable(r, ts);
}

EdgeSet cut_into(const Game& g, const EdgeSet& E, const Mask& A)
{
    EdgeSet r = E;
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (r[e] && !A[g.edges[e].from] && A[g.edges[e].to])
            r[e] = 0;
    return r;
}

Real to_real(const Q& q)
{
    return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}

struct PrecisionGuard {
    unsigned old;
    explicit PrecisionGuard(unsigned d) : old(Real::default_precision()) { Real::default_precision(d); }
    ~PrecisionGuard() { Real::default_precision(old); }
};

Real log_base(const EntropicParams& p)
{
    if (!p.base)
        return Real(1);
    if (*p.base <= 1)
        throw GameError("entropic base must be greater than 1");
    return log(to_real(*p.base));
}

// beta^x
Real power(const EntropicParams& p, const Real& x)
{
    if (!p.base)
        return exp(x);
    return exp(x * log_base(p));
}

std::vector<int> controlled_first_successor(const Game& g)
{
    std::vector<int> s(g.n(), -1);
    for (int v = 0; v < g.n(); ++v)
        if (g.controlled(v) && !g.out[v].empty())
            s[v] = g.edges[g.out[v].front()].to;
    return s;
}

}

Partition all_pessimists(const Game& g) { return Partition{std::vector<char>(g.p(), 1)}; }
Partition all_optimists(const Game& g) { return Partition{std::vector<char>(g.p(), 0)}; }

std::vector<Q> ExtremeMeasures::of(const Partition& part) const
{
    std::vector<Q> r(pm.size());
    for (std::size_t i = 0; i < pm.size(); ++i)
        r[i] = part.pessimist.at(i) ? pm[i] : om[i];
    return r;
}

ExtremeMeasures extreme_measures(const Game& g, const Memory& profile)
{
    need_terminal(g);
    Chain c = induced_chain(g, profile);
    auto ab = absorption(c);
    bool forever = may_run_forever(c);
    ExtremeMeasures m;
    for (int i = 0; i < g.p(); ++i) {
        std::set<Q> support;
        if (forever)
            support.insert(Q(0));
        for (int s = 0; s < c.size(); ++s)
            if (ab[s] != 0)
                support.insert(g.payoff[c.vertex[s]][i]);
        m.pm.push_back(*support.begin());
        m.om.push_back(*support.rbegin());
    }
    return m;
}

std::vector<Q> extreme_measure(const Game& g, const Partition& part, const Memory& profile)
{
    return extreme_measures(g, profile).of(part);
}

std::string RiskValue::str(int digits) const
{
    if (exact)
        return q_str(*exact);
    return value.str(digits);
}

RiskValue entropic_measure(const Game& g, const EntropicParams& params, const Memory& profile, int player)
{
    need_terminal(g);
    if (params.base && *params.base <= 1)
        throw GameError("entropic base must be greater than 1");
    PrecisionGuard guard(params.digits);
    Chain c = induced_chain(g, profile);
    auto ab = absorption(c);
    const Q& rho = params.rho.at(player);
    RiskValue r;
    if (rho == 0) {
        Q e = 0;
        for (int s = 0; s < c.size(); ++s)
            if (ab[s] != 0)
                e += ab[s] * g.payoff[c.vertex[s]][player];
        r.exact = e;
        r.value = to_real(e);
        return r;
    }
    Q rest = 1;
    Real sum = 0;
    Real mr = -to_real(rho);
    for (int s = 0; s < c.size(); ++s)
        if (ab[s] != 0) {
            rest -= ab[s];
            sum += to_real(ab[s]) * power(params, mr * to_real(g.payoff[c.vertex[s]][player]));
        }
    sum += to_real(rest);
    r.value = -(log(sum) / log_base(params)) / to_real(rho);
    return r;
}

bool verify_xrse(const Game& g, const Partition& part, const Memory& profile)
{
    need_terminal(g);
    auto cur = extreme_measure(g, part, profile);
    for (int i = 0; i < g.p(); ++i) {
        DeviationGame d = deviation_game(g, profile, i);
        Q best = extreme_values(d.game, part, i, all_edges(d.game))[d.game.init];
        if (best > cur[i])
            return false;
    }
    return true;
}

Memory stationary_profile(const Game& g, const EdgeSet& F)
{
    Memory m;
    m.states = {"q0"};
    for (int i = 0; i < g.p(); ++i)
        m.owners.push_back(i);
    for (int v = 0; v < g.n(); ++v) {
        if (g.owner[v] == TERMINAL)
            continue;
        if (!g.controlled(v)) {
            m.trans.push_back(MemTransition{0, v, 0, -1, Q(0), false});
            continue;
        }
        for (int e : g.out[v])
            if (F[e])
                m.trans.push_back(MemTransition{0, v, 0, g.edges[e].to, Q(0), false});
    }
    m.validate(g);
    return m;
}

std::vector<int> punishing_profile(const Game& g, const Partition& part, int i)
{
    std::vector<int> others;
    for (int v = 0; v < g.n(); ++v)
        if (g.controlled(v) && g.owner[v] != i)
            others.push_back(v);
    double total = 1;
    for (int v : others)
        total *= (double)g.out[v].size();
    if (total > 2e5)
        throw GameError("too many positional profiles to search for a punishment");
    std::vector<std::size_t> pick(others.size(), 0);
    auto edges_of = [&] {
        EdgeSet F = all_edges(g);
        for (std::size_t k = 0; k < others.size(); ++k)
            for (std::size_t j = 0; j < g.out[others[k]].size(); ++j)
                F[g.out[others[k]][j]] = j == pick[k];
        return F;
    };
    auto advance = [&] {
        for (std::size_t k = 0; k < others.size(); ++k) {
            if (++pick[k] < g.out[others[k]].size())
                return true;
            pick[k] = 0;
        }
        return false;
    };
    std::vector<Q> low;
    do {
        auto val = extreme_values(g, part, i, edges_of());
        if (low.empty())
            low = val;
        for (int v = 0; v < g.n(); ++v)
            low[v] = std::min(low[v], val[v]);
    } while (advance());
    std::fill(pick.begin(), pick.end(), 0);
    std::vector<std::size_t> best;
    std::optional<Q> best_sum;
    do {
        auto val = extreme_values(g, part, i, edges_of());
        if (val == low) {
            best = pick;
            break;
        }
        Q s = 0;
        for (auto& x : val)
            s += x;
        if (!best_sum || s < *best_sum) {
            best_sum = s;
            best = pick;
        }
    } while (advance());
    std::vector<int> r = controlled_first_successor(g);
    for (std::size_t k = 0; k < others.size(); ++k)
        r[others[k]] = g.edges[g.out[others[k]][best[k]]].to;
    return r;
}

namespace {

// selector[s][v]: the successor fixed at v, or -1 for uniform over F
Memory punishing_f_profile(const Game& g, const Partition& part, const EdgeSet& F,
                           const std::vector<std::vector<int>>& selector)
{
    int n = g.n(), S = (int)selector.size();
    std::vector<std::vector<int>> tau;
    for (int i = 0; i < g.p(); ++i)
        tau.push_back(punishing_profile(g, part, i));
    Adj fs = f_adj(g, F);
    Memory m;
    for (int i = 0; i < g.p(); ++i)
        m.owners.push_back(i);
    m.states.push_back("start");
    auto main = [&](int s, int u) { return 1 + s * n + u; };
    for (int s = 0; s < S; ++s)
        for (int u = 0; u < n; ++u)
            m.states.push_back((S > 1 ? "f" + std::to_string(s) : std::string()) + "@" + g.names[u]);
    int pun = (int)m.states.size();
    for (int i = 0; i < g.p(); ++i)
        m.states.push_back("punish:" + g.players[i]);
    auto go_main = [&](int from, int s, int w) {
        if (!g.controlled(w)) {
            m.trans.push_back(MemTransition{from, w, main(s, w), -1, Q(0), false});
        } else if (selector[s][w] >= 0) {
            m.trans.push_back(MemTransition{from, w, main(s, w), selector[s][w], Q(0), false});
        } else {
            for (int x : fs[w])
                m.trans.push_back(MemTransition{from, w, main(s, w), x, Q(0), false});
        }
    };
    auto go_pun = [&](int from, int i, int w) {
        m.trans.push_back(MemTransition{from, w, pun + i, g.controlled(w) ? tau[i][w] : -1, Q(0), false});
    };
    for (int w = 0; w < n; ++w) {
        if (g.owner[w] == TERMINAL)
            continue;
        for (int s = 0; s < S; ++s)
            go_main(0, s, w);
        for (int s = 0; s < S; ++s)
            for (int u = 0; u < n; ++u) {
                bool ok = true;
                if (g.controlled(u))
                    ok = selector[s][u] >= 0 ? w == selector[s][u]
                                             : std::find(fs[u].begin(), fs[u].end(), w) != fs[u].end();
                if (ok)
                    go_main(main(s, u), s, w);
                else
                    go_pun(main(s, u), g.owner[u], w);
            }
        for (int i = 0; i < g.p(); ++i)
            go_pun(pun + i, i, w);
    }
    m.validate(g);
    return m;
}

}

Memory averse_profile(const Game& g, const Partition& part, const EdgeSet& F)
{
    return punishing_f_profile(g, part, F, {std::vector<int>(g.n(), -1)});
}

Memory friendly_profile(const Game& g, const Partition& part, const EdgeSet& F)
{
    Adj fs = f_adj(g, F);
    Mask r = reachable(fs, g.init);
    std::vector<int> dom;
    for (int v = 0; v < g.n(); ++v)
        if (r[v] && g.controlled(v))
            dom.push_back(v);
    std::vector<std::vector<int>> sel{std::vector<int>(g.n(), -1)};
    for (int v : dom) {
        std::vector<std::vector<int>> next;
        for (const auto& s : sel)
            for (int w : fs[v]) {
                next.push_back(s);
                next.back()[v] = w;
            }
        sel = std::move(next);
        if (sel.size() > 4096)
            throw GameError("too many positional choices to build the profile");
    }
    return punishing_f_profile(g, part, F, sel);
}

json trace_step_json(const Game& g, const TraceStep& s)
{
    auto names = [&](const Mask& m) {
        json a = json::array();
        for (int v = 0; v < (int)m.size(); ++v)
            if (m[v])
                a.push_back(g.names[v]);
        return a;
    };
    json j;
    j["k"] = s.k;
    if (s.phase != "main")
        j["phase"] = s.phase;
    json e = json::array();
    for (int k = 0; k < (int)s.edges.size(); ++k)
        if (s.edges[k])
            e.push_back(g.names[g.edges[k].from] + "->" + g.names[g.edges[k].to]);
    j["edges"] = e;
    json z = json::object();
    for (auto& [i, x] : s.z)
        z[g.players[i]] = q_str(x);
    j["z"] = z;
    j["Vfrown"] = names(s.vfrown);
    j["A"] = names(s.A);
    if (!s.W.empty()) {
        json w = json::object();
        for (auto& [i, m] : s.W)
            w[g.players[i]] = names(m);
        j["W"] = w;
    }
    return j;
}

std::string trace_jsonl(const Game& g, const std::vector<TraceStep>& trace)
{
    std::string r;
    for (const auto& s : trace)
        r += trace_step_json(g, s).dump() + "\n";
    return r;
}

XrseRun xrse_exists(const Game& g, const Partition& part)
{
    need_terminal(g);
    for (int v = 0; v < g.n(); ++v)
        if (g.owner[v] == TERMINAL)
            for (auto& x : g.payoff[v])
                if (x < 0)
                    throw GameError("negative payoff at terminal " + g.names[v]);
    XrseRun run;
    EdgeSet E = all_edges(g);
    Mask term = terminals(g);
    for (int k = 0;; ++k) {
        TraceStep st;
        st.k = k;
        st.phase = "main";
        st.edges = E;
        st.A = reachable(f_adj(g, E), g.init);
        st.vfrown = Mask(g.n(), 0);
        auto pm = extreme_measures(g, stationary_profile(g, E)).pm;
        int chosen = -1;
        for (int i = 0; i < g.p(); ++i) {
            if (!part.pessimist.at(i))
                continue;
            Mask better(g.n(), 0);
            for (int v = 0; v < g.n(); ++v)
                better[v] = term[v] && g.payoff[v][i] > pm[i];
            std::vector<char> role(g.n(), RANDOM);
            for (int v = 0; v < g.n(); ++v)
                if (g.owner[v] == i)
                    role[v] = MINE;
            Mask W = complement(almost_sure_reach(g, role, better, E));
            st.z[i] = pm[i];
            st.W[i] = W;
            if (chosen < 0 && !W[g.init])
                chosen = i;
        }
        run.trace.push_back(st);
        if (chosen < 0)
            break;
        const Mask& W = st.W[chosen];
        for (int e = 0; e < (int)g.edges.size(); ++e) {
            int u = g.edges[e].from, v = g.edges[e].to;
            if (E[e] && st.A[u] && !W[u] && W[v])
                E[e] = 0;
        }
    }
    run.answer = Answer::yes;
    run.F = E;
    return run;
}

XrseRun xrse_constrained_optimists(const Game& g, const Partition& part, const Thresholds& t)
{
    need_terminal(g);
    for (int i = 0; i < g.p(); ++i)
        if (part.pessimist.at(i))
            throw GameError("player " + g.players[i] + " is a pessimist; all players must be optimists");
    XrseRun run;
    run.friendly = std::all_of(t.upper.begin(), t.upper.end(), [](const ExtRat& y) { return y >= ExtRat(0); });
    const int n = g.n(), v0 = g.init;
    Mask term = terminals(g);
    std::vector<Q> val(n);
    for (int v = 0; v < n; ++v)
        if (g.controlled(v))
            val[v] = extreme_adversarial_value(g, part, v);
    std::vector<char> all_opp(n, OPP), coop(n, MINE);
    for (int v = 0; v < n; ++v)
        if (g.owner[v] == CHANCE)
            all_opp[v] = coop[v] = RANDOM;

    auto z_of = [&](const EdgeSet& E) {
        Mask r = reachable(f_adj(g, E), v0);
        bool zero;
        if (run.friendly) {
            zero = !almost_sure_reach(g, all_opp, term, E)[v0];
        } else {
            Mask co = coreach_terminals(g, E);
            zero = false;
            for (int v = 0; v < n; ++v)
                zero = zero || (r[v] && !co[v]);
        }
        std::map<int, Q> z;
        for (int i = 0; i < g.p(); ++i) {
            std::optional<Q> best;
            if (zero)
                best = Q(0);
            for (int v = 0; v < n; ++v)
                if (r[v] && term[v] && (!best || g.payoff[v][i] > *best))
                    best = g.payoff[v][i];
            z[i] = *best;
        }
        return z;
    };
    auto frown = [&](const std::map<int, Q>& z) {
        Mask f(n, 0);
        for (int v = 0; v < n; ++v)
            f[v] = g.controlled(v) && val[v] > z.at(g.owner[v]);
        return f;
    };

    std::vector<EdgeSet> E{all_edges(g)};
    TraceStep st;
    st.k = 0;
    st.phase = "main";
    st.edges = E[0];
    st.vfrown = Mask(n, 0);
    for (int v = 0; v < n; ++v)
        if (term[v])
            for (int i = 0; i < g.p(); ++i)
                if (ExtRat(g.payoff[v][i]) > t.upper[i])
                    st.vfrown[v] = 1;
    st.A = positive_prob_attractor(g, st.vfrown, E[0]);
    run.trace.push_back(st);
    if (st.A[v0])
        return run;
    E.push_back(cut_into(g, E[0], st.A));

    std::map<int, Q> z;
    int k = 0;
    if (run.friendly) {
        while (k == 0 || E[k + 1] != E[k]) {
            ++k;
            TraceStep s;
            s.k = k;
            s.phase = "main";
            s.edges = E[k];
            z = z_of(E[k]);
            s.z = z;
            s.vfrown = frown(z);
            s.A = positive_prob_attractor(g, s.vfrown, E[k]);
            run.trace.push_back(s);
            if (s.A[v0])
                return run;
            E.push_back(cut_into(g, E[k], s.A));
        }
        for (int i = 0; i < g.p(); ++i)
            if (ExtRat(z[i]) < t.lower[i])
                return run;
        run.answer = Answer::yes;
        run.F = E[k + 1];
        return run;
    }

    while (k <= 1 || E[k + 1] != E[k - 1]) {
        ++k;
        TraceStep s;
        s.k = k;
        s.phase = "main";
        s.edges = E[k];
        if (k % 2 == 0) {
            z = z_of(E[k]);
            s.z = z;
            s.vfrown = frown(z);
            s.A = positive_prob_attractor(g, s.vfrown, E[k]);
        } else {
            s.vfrown = Mask(n, 0);
            s.A = complement(almost_sure_reach(g, coop, term, E[k]));
        }
        run.trace.push_back(s);
        if (s.A[v0])
            return run;
        E.push_back(cut_into(g, E[k], s.A));
    }
    for (int i = 0; i < g.p(); ++i)
        if (ExtRat(z[i]) < t.lower[i])
            return run;

    EdgeSet F = E[k + 1];
    auto reach_without = [&](int from, int skip) {
        EdgeSet G = F;
        if (skip >= 0)
            G[skip] = 0;
        return reachable(f_adj(g, G), from);
    };
    for (int l = 0;; ++l) {
        TraceStep s;
        s.k = l;
        s.phase = "refine";
        s.edges = F;
        s.z = z;
        s.vfrown = Mask(n, 0);
        s.A = Mask(n, 0);
        run.trace.push_back(s);
        int cut = -1;
        for (int e = 0; e < (int)g.edges.size() && cut < 0; ++e) {
            if (!F[e])
                continue;
            int u = g.edges[e].from, v = g.edges[e].to;
            if (!g.controlled(u))
                continue;
            int deg = 0;
            for (int f : g.out[u])
                deg += F[f];
            if (deg < 2)
                continue;
            Mask from_v = reach_without(v, -1);
            Mask from_v0 = reach_without(v0, e);
            bool c2 = true;
            for (int x = 0; x < n; ++x)
                if (term[x] && from_v[x] && !from_v0[x])
                    c2 = false;
            if (!c2)
                continue;
            Mask from_u = reach_without(u, e);
            bool c3 = false;
            for (int x = 0; x < n; ++x)
                c3 = c3 || (term[x] && from_u[x]);
            if (c3)
                cut = e;
        }
        if (cut < 0)
            break;
        F[cut] = 0;
    }
    run.answer = Answer::yes;
    run.F = F;
    return run;
}

XrseSearch xrse_search_bounded(const Game& g, const Partition& part, const Thresholds& t, int bound)
{
    need_terminal(g);
    const int n = g.n();
    XrseSearch res;
    std::vector<std::vector<int>> succ(n);
    for (int v = 0; v < n; ++v)
        succ[v] = g.succ(v);
    for (int b = 1; b <= bound; ++b) {
        // option at (q, v): next state and, on controlled v, a nonempty subset of successors
        auto nopt = [&](int v) {
            return g.controlled(v) ? b * ((1 << succ[v].size()) - 1) : b;
        };
        std::vector<int> opt(b * n, -1);
        auto next_of = [&](int q, int v) { return opt[q * n + v] % b; };
        auto emits = [&](int q, int v) {
            std::vector<int> r;
            int mask = opt[q * n + v] / b + 1;
            for (std::size_t j = 0; j < succ[v].size(); ++j)
                if (mask >> j & 1)
                    r.push_back(succ[v][j]);
            return r;
        };
        auto build = [&] {
            Memory m;
            for (int q = 0; q < b; ++q)
                m.states.push_back("m" + std::to_string(q));
            for (int i = 0; i < g.p(); ++i)
                m.owners.push_back(i);
            for (int q = 0; q < b; ++q)
                for (int v = 0; v < n; ++v) {
                    if (g.owner[v] == TERMINAL)
                        continue;
                    if (opt[q * n + v] < 0) {
                        if (g.controlled(v))
                            m.trans.push_back(MemTransition{q, v, q, succ[v][0], Q(0), false});
                        else
                            m.trans.push_back(MemTransition{q, v, q, -1, Q(0), false});
                        continue;
                    }
                    int q2 = next_of(q, v);
                    if (g.controlled(v)) {
                        for (int w : emits(q, v))
                            m.trans.push_back(MemTransition{q, v, q2, w, Q(0), false});
                    } else {
                        m.trans.push_back(MemTransition{q, v, q2, -1, Q(0), false});
                    }
                }
            return m;
        };
        // first unassigned pair reachable on the profile's own plays, or, when
        // `deviations`, along any single-vertex deviation
        auto open_pair = [&](bool deviations) {
            std::vector<char> seen(b * n, 0);
            std::deque<int> todo{g.init};
            seen[g.init] = 1;
            while (!todo.empty()) {
                int x = todo.front();
                todo.pop_front();
                int q = x / n, v = x % n;
                if (g.owner[v] == TERMINAL)
                    continue;
                if (opt[x] < 0)
                    return x;
                int q2 = next_of(q, v);
                std::vector<int> nxt = (g.controlled(v) && !deviations) ? emits(q, v) : succ[v];
                for (int w : nxt) {
                    int y = q2 * n + w;
                    if (!seen[y]) {
                        seen[y] = 1;
                        todo.push_back(y);
                    }
                }
            }
            return -1;
        };
        std::function<bool(bool)> dfs = [&](bool measured) -> bool {
            if (!measured) {
                int x = open_pair(false);
                if (x >= 0) {
                    for (int o = 0; o < nopt(x % n); ++o) {
                        opt[x] = o;
                        if (dfs(false))
                            return true;
                    }
                    opt[x] = -1;
                    return false;
                }
                Memory m = build();
                auto meas = extreme_measure(g, part, m);
                std::vector<ExtRat> ex(meas.begin(), meas.end());
                if (!within(t, ex))
                    return false;
                return dfs(true);
            }
            int x = open_pair(true);
            if (x >= 0) {
                for (int o = 0; o < nopt(x % n); ++o) {
                    opt[x] = o;
                    if (dfs(true))
                        return true;
                }
                opt[x] = -1;
                return false;
            }
            Memory m = build();
            ++res.tried;
            if (verify_xrse(g, part, m)) {
                res.answer = Answer::yes;
                res.profile = m;
                return true;
            }
            return false;
        };
        if (dfs(false))
            return res;
    }
    return res;
}

Real modified_payoff(const Q& x, const EntropicParams& params, int player)
{
    const Q& rho = params.rho.at(player);
    if (rho == 0)
        return to_real(x);
    Real b = power(params, -to_real(rho) * to_real(x));
    return rho > 0 ? Real(1) - b : b - Real(1);
}

ErseCheck verify_erse_stationary(const Game& g, const EntropicParams& params, const Memory& profile,
                                 const Real& tolerance)
{
    need_terminal(g);
    if (params.base && *params.base <= 1)
        throw GameError("entropic base must be greater than 1");
    if (profile.size() != 1)
        throw GameError("profile is not stationary");
    PrecisionGuard guard(params.digits);
    Real tol(tolerance);
    ErseCheck r;
    r.ok = true;
    Chain c = induced_chain(g, profile);
    auto ab = absorption(c);
    for (int i = 0; i < g.p(); ++i) {
        Real v = 0;
        for (int s = 0; s < c.size(); ++s)
            if (ab[s] != 0)
                v += to_real(ab[s]) * modified_payoff(g.payoff[c.vertex[s]][i], params, i);
        DeviationGame d = deviation_game(g, profile, i);
        const Game& x = d.game;
        std::vector<Real> val(x.n(), Real(0));
        std::vector<std::vector<std::pair<int, Real>>> arcs(x.n());
        for (int u = 0; u < x.n(); ++u) {
            if (x.owner[u] == TERMINAL) {
                val[u] = modified_payoff(x.payoff[u][i], params, i);
                continue;
            }
            for (int e : x.out[u])
                arcs[u].push_back({x.edges[e].to, x.owner[u] == CHANCE ? to_real(x.edges[e].prob) : Real(1)});
        }
        Real eps = tol / 1000;
        for (int it = 0; it < 200000; ++it) {
            Real delta = 0;
            for (int u = 0; u < x.n(); ++u) {
                if (x.owner[u] == TERMINAL)
                    continue;
                Real nv;
                if (x.owner[u] == CHANCE) {
                    nv = 0;
                    for (auto& [w, p] : arcs[u])
                        nv += p * val[w];
                } else {
                    nv = val[arcs[u][0].first];
                    for (auto& [w, p] : arcs[u])
                        if (val[w] > nv)
                            nv = val[w];
                }
                Real dd = abs(nv - val[u]);
                if (dd > delta)
                    delta = dd;
                val[u] = nv;
            }
            if (delta < eps)
                break;
        }
        r.value.push_back(v);
        r.best.push_back(val[x.init]);
        if (val[x.init] > v + tol)
            r.ok = false;
    }
    return r;
}

}
