#include "equilibra/chain.hpp"
#include "equilibra/equilibria.hpp"
#include "equilibra/graph.hpp"
#include "equilibra/lp.hpp"
#include "equilibra/product.hpp"
#include "equilibra/zs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace eq {

const char* answer_name(Answer a)
{
    switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
    }
    return "?";
}

Thresholds open_thresholds(const Game& g)
{
    return Thresholds{std::vector<ExtRat>(g.p(), ExtRat::neg_inf()), std::vector<ExtRat>(g.p(), ExtRat::pos_inf())};
}

bool within(const Thresholds& t, const std::vector<ExtRat>& payoff)
{
    for (std::size_t i = 0; i < payoff.size(); ++i)
        if (payoff[i] < t.lower[i] || payoff[i] > t.upper[i])
            return false;
    return true;
}

std::vector<Q> seal_payoff(const Game& g, const std::vector<std::vector<int>>& cycles,
                           const std::vector<std::vector<Q>>& alpha)
{
    std::vector<std::vector<Q>> mp(cycles.size(), std::vector<Q>(g.p()));
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cy = cycles[c];
        for (int i = 0; i < g.p(); ++i) {
            Q s = 0;
            for (std::size_t k = 0; k < cy.size(); ++k)
                s += g.edges[g.edge(cy[k], cy[(k + 1) % cy.size()])].reward[i];
            mp[c][i] = s / Q((long)cy.size());
        }
    }
    std::vector<Q> z(g.p());
    for (int i = 0; i < g.p(); ++i) {
        std::optional<Q> best;
        for (const auto& a : alpha) {
            Q s = 0;
            for (std::size_t c = 0; c < cycles.size(); ++c)
                s += a[c] * mp[c][i];
            if (!best || s < *best)
                best = s;
        }
        z[i] = best ? *best : Q(0);
    }
    return z;
}

// ---------------------------------------------------------------- consistent plays

namespace {

using Bits = unsigned long long;

std::vector<int> bit_list(Bits b)
{
    std::vector<int> r;
    for (; b; b &= b - 1)
        r.push_back(__builtin_ctzll(b));
    return r;
}

Bits grow(const std::vector<Bits>& adj, int s, Bits within)
{
    Bits seen = Bits(1) << s, frontier = seen;
    while (frontier) {
        Bits next = 0;
        for (Bits f = frontier; f; f &= f - 1)
            next |= adj[__builtin_ctzll(f)];
        next &= within & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen;
}

// split a circulation into simple cycles; weights are time shares
void decompose(const Game& g, std::map<int, Q> flow, std::vector<std::pair<std::vector<int>, Q>>& out)
{
    for (;;) {
        int start = -1;
        for (auto& [e, f] : flow)
            if (f > 0) {
                start = g.edges[e].from;
                break;
            }
        if (start < 0)
            return;
        std::vector<int> walk{start};
        std::map<int, std::size_t> pos{{start, 0}};
        std::vector<int> used;
        for (;;) {
            int u = walk.back(), pick = -1;
            for (int e : g.out[u])
                if (flow.count(e) && flow[e] > 0) {
                    pick = e;
                    break;
                }
            int w = g.edges[pick].to;
            used.push_back(pick);
            auto it = pos.find(w);
            if (it != pos.end()) {
                std::vector<int> cyc(walk.begin() + it->second, walk.end());
                std::vector<int> es(used.begin() + it->second, used.end());
                Q m = flow[es[0]];
                for (int e : es)
                    m = std::min(m, flow[e]);
                for (int e : es)
                    flow[e] -= m;
                out.push_back({least_rotation(cyc), m * Q((long)cyc.size())});
                break;
            }
            pos[w] = walk.size();
            walk.push_back(w);
        }
    }
}

}

std::optional<MpPlay> find_consistent_mp(const Game& g, const Requirement& lambda, int v0, const Thresholds& t)
{
    int n = g.n();
    if (n > 16)
        throw GameError("play search is limited to 16 vertices");
    std::vector<Bits> adj(n, 0), radj(n, 0);
    for (const auto& e : g.edges) {
        adj[e.from] |= Bits(1) << e.to;
        radj[e.to] |= Bits(1) << e.from;
    }
    for (Bits W = 1; W < (Bits(1) << n); ++W) {
        int s = __builtin_ctzll(W);
        if (grow(adj, s, W) != W || grow(radj, s, W) != W)
            continue;
        if (__builtin_popcountll(W) == 1 && !((adj[s] >> s) & 1))
            continue;
        // occurrence sets: W plus a simple access path from v0
        std::set<Bits> entries;
        std::function<void(int, Bits)> walk = [&](int u, Bits path) {
            if ((W >> u) & 1) {
                entries.insert(path | W);
                return;
            }
            for (Bits f = adj[u]; f; f &= f - 1) {
                int w = __builtin_ctzll(f);
                if (!((path >> w) & 1))
                    walk(w, path | (Bits(1) << w));
            }
        };
        walk(v0, Bits(1) << v0);
        std::vector<Bits> occ;
        for (Bits a : entries) {
            bool minimal = true;
            for (Bits b : entries)
                if (b != a && (b & a) == b)
                    minimal = false;
            if (minimal)
                occ.push_back(a);
        }
        std::vector<int> es;
        for (int e = 0; e < (int)g.edges.size(); ++e)
            if (((W >> g.edges[e].from) & 1) && ((W >> g.edges[e].to) & 1))
                es.push_back(e);
        for (Bits Wp : occ) {
            std::vector<ExtRat> floor(g.p(), ExtRat::neg_inf());
            for (int v : bit_list(Wp))
                if (g.controlled(v))
                    floor[g.owner[v]] = max(floor[g.owner[v]], lambda[v]);
            if (std::any_of(floor.begin(), floor.end(), [](const ExtRat& x) { return x.is_pos_inf(); }))
                continue;
            LinearProgram lp;
            int p = g.p(), m = (int)es.size();
            for (int k = 0; k < p * m; ++k)
                lp.add_var();
            std::vector<int> z(p);
            for (int i = 0; i < p; ++i)
                z[i] = lp.add_var(true);
            for (int j = 0; j < p; ++j) {
                std::vector<std::pair<int, Q>> one;
                for (int k = 0; k < m; ++k)
                    one.push_back({j * m + k, Q(1)});
                lp.add_row(one, LinearProgram::EQ, Q(1));
                for (int v : bit_list(W)) {
                    std::vector<std::pair<int, Q>> row;
                    for (int k = 0; k < m; ++k) {
                        const auto& e = g.edges[es[k]];
                        if (e.to == v && e.from != v)
                            row.push_back({j * m + k, Q(1)});
                        if (e.from == v && e.to != v)
                            row.push_back({j * m + k, Q(-1)});
                    }
                    if (!row.empty())
                        lp.add_row(row, LinearProgram::EQ, Q(0));
                }
                for (int i = 0; i < p; ++i) {
                    std::vector<std::pair<int, Q>> row;
                    for (int k = 0; k < m; ++k)
                        row.push_back({j * m + k, g.edges[es[k]].reward[i]});
                    row.push_back({z[i], Q(-1)});
                    lp.add_row(row, i == j ? LinearProgram::EQ : LinearProgram::GE, Q(0));
                }
            }
            for (int i = 0; i < p; ++i) {
                ExtRat lo = max(t.lower[i], floor[i]);
                if (lo.finite())
                    lp.add_row({{z[i], Q(1)}}, LinearProgram::GE, lo.value());
                if (t.upper[i].finite())
                    lp.add_row({{z[i], Q(1)}}, LinearProgram::LE, t.upper[i].value());
            }
            auto r = solve_lp(lp);
            if (r.status != LpStatus::optimal)
                continue;
            MpPlay play;
            play.W = bit_list(W);
            play.Wp = bit_list(Wp);
            std::vector<std::vector<std::pair<std::vector<int>, Q>>> parts(p);
            std::set<std::vector<int>> all;
            for (int j = 0; j < p; ++j) {
                std::map<int, Q> flow;
                for (int k = 0; k < m; ++k)
                    if (r.x[j * m + k] > 0)
                        flow[es[k]] = r.x[j * m + k];
                decompose(g, flow, parts[j]);
                for (auto& [c, a] : parts[j])
                    all.insert(c);
            }
            play.cycles.assign(all.begin(), all.end());
            play.alpha.assign(p, std::vector<Q>(play.cycles.size(), Q(0)));
            for (int j = 0; j < p; ++j)
                for (auto& [c, a] : parts[j]) {
                    auto at = std::find(play.cycles.begin(), play.cycles.end(), c) - play.cycles.begin();
                    play.alpha[j][at] += a;
                }
            play.payoff = seal_payoff(g, play.cycles, play.alpha);
            return play;
        }
    }
    return std::nullopt;
}

std::optional<Lasso> find_consistent_parity(const Game& g, const Requirement& lambda, int v0, const Thresholds& t)
{
    int n = g.n(), p = g.p();
    // target least colors, per player, of the right parity for an allowed payoff
    std::vector<std::vector<int>> targets(p);
    for (int i = 0; i < p; ++i) {
        std::set<int> cs;
        for (int v = 0; v < n; ++v)
            cs.insert(g.color[v][i]);
        for (int c : cs) {
            ExtRat pay(c % 2 == 0 ? 1 : 0);
            if (pay >= t.lower[i] && pay <= t.upper[i])
                targets[i].push_back(c);
        }
        if (targets[i].empty())
            return std::nullopt;
    }
    Adj adj(n);
    for (int v = 0; v < n; ++v)
        adj[v] = g.succ(v);
    std::vector<int> z(p);
    std::optional<Lasso> found;
    std::function<void(int)> rec = [&](int i) {
        if (found)
            return;
        if (i < p) {
            for (int c : targets[i]) {
                z[i] = c;
                rec(i + 1);
                if (found)
                    return;
            }
            return;
        }
        Mask allowed(n, 1);
        for (int v = 0; v < n; ++v) {
            if (lambda[v].is_pos_inf())
                allowed[v] = 0;
            else if (g.controlled(v) && lambda[v] > ExtRat(0) && z[g.owner[v]] % 2 == 1)
                allowed[v] = 0;
        }
        if (!allowed[v0])
            return;
        Mask inner(n, 0);
        for (int v = 0; v < n; ++v) {
            inner[v] = allowed[v];
            for (int j = 0; j < p && inner[v]; ++j)
                if (g.color[v][j] < z[j])
                    inner[v] = 0;
        }
        Mask reach = reachable(adj, v0, allowed);
        for (const auto& comp : nontrivial_sccs(adj, inner)) {
            if (!reach[comp[0]])
                continue;
            std::vector<int> need;
            bool ok = true;
            for (int j = 0; j < p && ok; ++j) {
                auto it = std::find_if(comp.begin(), comp.end(), [&](int v) { return g.color[v][j] == z[j]; });
                if (it == comp.end())
                    ok = false;
                else
                    need.push_back(*it);
            }
            if (!ok)
                continue;
            Mask in(n, 0);
            for (int v : comp)
                in[v] = 1;
            // shortest path in `allowed` from v0 into the component
            std::vector<int> prev(n, -2);
            std::vector<int> queue{v0};
            prev[v0] = -1;
            int entry = -1;
            for (std::size_t k = 0; k < queue.size() && entry < 0; ++k) {
                int u = queue[k];
                if (in[u]) {
                    entry = u;
                    break;
                }
                for (int w : adj[u])
                    if (allowed[w] && prev[w] == -2) {
                        prev[w] = u;
                        queue.push_back(w);
                    }
            }
            Lasso l;
            for (int u = prev[entry]; u >= 0; u = prev[u])
                l.prefix.insert(l.prefix.begin(), u);
            // closed walk from the entry through every needed vertex
            auto path = [&](int a, int b) {
                std::vector<int> pr(n, -2), q{a};
                pr[a] = -1;
                for (std::size_t k = 0; k < q.size(); ++k)
                    for (int w : adj[q[k]])
                        if (in[w] && pr[w] == -2) {
                            pr[w] = q[k];
                            q.push_back(w);
                        }
                std::vector<int> r;
                for (int u = b; u != a; u = pr[u])
                    r.insert(r.begin(), u);
                return r;
            };
            std::vector<int> cyc{entry};
            int at = entry;
            for (int goal : need) {
                auto seg = path(at, goal);
                cyc.insert(cyc.end(), seg.begin(), seg.end());
                at = goal;
            }
            if (cyc.size() == 1) {
                int w = *std::find_if(adj[at].begin(), adj[at].end(), [&](int x) { return in[x]; });
                cyc.push_back(w);
                at = w;
            }
            auto back = path(at, entry);
            cyc.insert(cyc.end(), back.begin(), back.end());
            if (cyc.back() != entry)
                cyc.push_back(entry);
            cyc.pop_back();
            l.cycle = cyc;
            l = canonical(l);
            if (!is_lambda_consistent(g, lambda, l))
                continue;
            std::vector<ExtRat> pay = eval_lasso(g, l);
            if (!within(t, pay))
                continue;
            found = l;
            return;
        }
    };
    rec(0);
    return found;
}

// ---------------------------------------------------------------- Nash

bool ne_outcome_check(const Game& g, const Lasso& l)
{
    if (g.mode != Mode::parity && g.mode != Mode::mean_payoff)
        throw GameError(std::string("NE outcome check not available in mode ") + mode_name(g.mode));
    return is_lambda_consistent(g, adversarial_values(g), l);
}

NeSearch ne_constrained_exists(const Game& g, const Thresholds& t)
{
    if (g.init < 0)
        throw GameError("constrained existence needs an initial vertex");
    NeSearch r;
    Requirement val = adversarial_values(g);
    if (g.mode == Mode::parity) {
        r.lasso = find_consistent_parity(g, val, g.init, t);
        r.answer = r.lasso ? Answer::yes : Answer::no;
    } else if (g.mode == Mode::mean_payoff) {
        r.play = find_consistent_mp(g, val, g.init, t);
        r.answer = r.play ? Answer::yes : Answer::no;
    } else {
        throw GameError(std::string("NE constrained existence not available in mode ") + mode_name(g.mode));
    }
    return r;
}

Lasso profile_outcome(const Game& g, const Memory& m)
{
    if (g.init < 0)
        throw GameError("profile outcome needs an initial vertex");
    std::map<std::pair<int, int>, std::size_t> seen;
    std::vector<int> play;
    int v = g.init, q = m.initial;
    for (;;) {
        auto it = seen.find({v, q});
        if (it != seen.end()) {
            Lasso l;
            l.prefix.assign(play.begin(), play.begin() + it->second);
            l.cycle.assign(play.begin() + it->second, play.end());
            return canonical(l);
        }
        seen[{v, q}] = play.size();
        play.push_back(v);
        if (g.owner[v] == TERMINAL)
            return Lasso{play, {}};
        if (!g.controlled(v))
            throw GameError("profile outcome is random at chance vertex " + g.names[v]);
        auto en = m.enabled(g, q, v);
        if (en.size() != 1)
            throw GameError("profile is not deterministic at " + m.states[q] + "/" + g.names[v]);
        v = en[0].first->emit;
        q = en[0].first->to;
    }
}

namespace {

// least initial credit keeping the energy of `player` non-negative forever; empty if none
std::vector<std::optional<Q>> min_credit(const Game& x, int player)
{
    int n = x.n();
    Q bound = 0;
    for (int v = 0; v < n; ++v) {
        Q worst = 0;
        for (int e : x.out[v])
            worst = std::min(worst, x.edges[e].reward[player]);
        bound -= worst;
    }
    std::vector<std::optional<Q>> cr(n, Q(0));
    for (bool changed = true; changed;) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (!cr[v])
                continue;
            std::optional<Q> best;
            for (int e : x.out[v]) {
                const auto& nxt = cr[x.edges[e].to];
                if (!nxt)
                    continue;
                Q need = *nxt - x.edges[e].reward[player];
                if (need < 0)
                    need = 0;
                if (!best || need < *best)
                    best = need;
            }
            if (best && *best > bound)
                best.reset();
            if (best != cr[v]) {
                cr[v] = best;
                changed = true;
            }
        }
    }
    return cr;
}

bool energy_deviation(const Game& g, const Memory& profile, int i)
{
    auto d = deviation_game(g, profile, i);
    return min_credit(d.game, i)[d.game.init] == Q(0);
}

Q expectation(const Game& g, const Chain& c, int i)
{
    Q s = 0;
    for (auto& [v, pr] : payoff_distribution(g, c, i))
        s += v * pr;
    return s;
}

}

bool verify_ne_energy(const Game& g, const Memory& profile)
{
    if (g.mode != Mode::energy)
        throw GameError("verify_ne_energy needs an energy game");
    profile.validate(g);
    if (!profile.deterministic())
        throw GameError("energy NE verification needs a deterministic profile");
    Lasso out = profile_outcome(g, profile);
    for (int i = 0; i < g.p(); ++i) {
        if (eval_lasso(g, out, i) == ExtRat(1))
            continue;
        if (energy_deviation(g, profile, i))
            return false;
    }
    return true;
}

bool verify_ne_generic(const Game& g, const Memory& profile)
{
    profile.validate(g);
    for (int i = 0; i < g.p(); ++i)
        if (!profile.speaks_for(i))
            throw GameError("profile does not cover player " + g.players[i]);
    switch (g.mode) {
    case Mode::energy:
        return verify_ne_energy(g, profile);
    case Mode::discounted:
        throw GameError("best response in discounted-sum games is not supported");
    case Mode::parity:
    case Mode::mean_payoff: {
        Lasso out = profile_outcome(g, profile);
        for (int i = 0; i < g.p(); ++i) {
            ExtRat got = eval_lasso(g, out, i);
            auto d = deviation_game(g, profile, i);
            ExtRat best = g.mode == Mode::parity ? ExtRat(parity_values(d.game, i)[d.game.init])
                                                 : ExtRat(mp_values(d.game, i)[d.game.init]);
            if (best > got)
                return false;
        }
        return true;
    }
    case Mode::terminal: {
        Chain base = induced_chain(g, profile);
        for (int i = 0; i < g.p(); ++i) {
            Q got = expectation(g, base, i);
            auto d = deviation_game(g, profile, i);
            const Game& x = d.game;
            std::vector<int> mine;
            double combos = 1;
            for (int v = 0; v < x.n(); ++v)
                if (x.owner[v] == i) {
                    mine.push_back(v);
                    combos *= (double)x.out[v].size();
                }
            if (combos > 1e5)
                throw GameError("best-response enumeration too large");
            std::vector<int> pick(mine.size(), 0);
            for (;;) {
                Memory pos;
                pos.states = {"q0"};
                pos.owners = {i};
                for (int v = 0; v < x.n(); ++v) {
                    if (x.owner[v] == TERMINAL)
                        continue;
                    if (x.owner[v] != i) {
                        pos.trans.push_back(MemTransition{0, v, 0, -1, Q(0), false});
                        continue;
                    }
                    auto k = std::find(mine.begin(), mine.end(), v) - mine.begin();
                    pos.trans.push_back(MemTransition{0, v, 0, x.edges[x.out[v][pick[k]]].to, Q(0), false});
                }
                if (expectation(x, induced_chain(x, pos), i) > got)
                    return false;
                std::size_t k = 0;
                while (k < mine.size() && ++pick[k] == (int)x.out[mine[k]].size())
                    pick[k++] = 0;
                if (k == mine.size())
                    break;
            }
        }
        return true;
    }
    }
    return true;
}

}
