#include "equilibra/equilibria.hpp"
#include "equilibra/graph.hpp"
#include "equilibra/lp.hpp"
#include "equilibra/zs.hpp"

#include <algorithm>
#include <set>

namespace eq {

// ---------------------------------------------------------------- parity

bool check_reduced_prover_parity(const Game& g, const Requirement& lambda, int i, int u,
                                 const std::map<int, Lasso>& tau)
{
    if (g.mode != Mode::parity)
        throw GameError("reduced Prover check needs a parity game");
    if (!lambda[u].finite())
        throw GameError("requirement at " + g.names[u] + " must be 0 or 1");
    if (lambda[u] >= ExtRat(1))
        return true;
    int n = g.n();
    int top = 0;
    for (int v = 0; v < n; ++v)
        top = std::max(top, g.color[v][i] + 1);
    // nodes: vertices 0..n-1, then deviation nodes
    Adj adj(n);
    std::vector<int> color(n, top);
    Mask seen(n, 0);
    std::vector<int> todo{u};
    seen[u] = 1;
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        auto it = tau.find(v);
        if (it == tau.end())
            return false;
        const Lasso& l = it->second;
        check_lasso(g, l);
        if (lasso_first(l) != v)
            throw GameError("proposal at " + g.names[v] + " starts elsewhere");
        if (!is_lambda_consistent(g, lambda, l))
            throw GameError("proposal at " + g.names[v] + " is not consistent with the requirement");
        if (eval_lasso(g, l, i) > lambda[u])
            return false;
        std::vector<int> play = l.prefix;
        play.insert(play.end(), l.cycle.begin(), l.cycle.end());
        play.push_back(l.cycle.front());
        int low = top;
        for (std::size_t k = 0; k + 1 < play.size(); ++k) {
            int x = play[k];
            low = std::min(low, g.color[x][i]);
            if (g.owner[x] != i)
                continue;
            for (int w : g.succ(x)) {
                if (w == play[k + 1])
                    continue;
                int d = (int)adj.size();
                adj.emplace_back(std::vector<int>{w});
                color.push_back(low);
                adj[v].push_back(d);
                if (!seen[w]) {
                    seen[w] = 1;
                    todo.push_back(w);
                }
            }
        }
    }
    // Challenger wins by deviating forever along a cycle whose least color is even
    int N = (int)adj.size();
    for (int e = 0; e < top; e += 2) {
        Mask keep(N, 0);
        for (int k = 0; k < N; ++k)
            keep[k] = color[k] >= e;
        for (const auto& comp : nontrivial_sccs(adj, keep))
            for (int k : comp)
                if (color[k] == e)
                    return false;
    }
    return true;
}

SpeParity spe_exists_parity(const Game& g, const Thresholds& t)
{
    if (g.mode != Mode::parity)
        throw GameError("spe_exists_parity needs a parity game");
    if (g.init < 0)
        throw GameError("constrained existence needs an initial vertex");
    auto seq = nego_iterate(g, 2 * g.n() + 2);
    SpeParity r;
    r.lambda = seq.iterates.back();
    if (!seq.converged)
        throw GameError("internal: parity negotiation did not converge");
    if (r.lambda[g.init].is_pos_inf())
        return r;
    r.lasso = find_consistent_parity(g, r.lambda, g.init, t);
    r.answer = r.lasso ? Answer::yes : Answer::no;
    return r;
}

// ---------------------------------------------------------------- mean-payoff

namespace {

Q cycle_mean(const Game& g, const std::vector<int>& cy, int i)
{
    Q s = 0;
    for (std::size_t k = 0; k < cy.size(); ++k)
        s += g.edges[g.edge(cy[k], cy[(k + 1) % cy.size()])].reward[i];
    return s / Q((long)cy.size());
}

bool distinct(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

// h.c is a simple history followed by a simple cycle closing on h's last
// vertex, and W is the vertex set of a play after c: its components form a
// chain from a successor of that vertex down to a sink with a cycle, where x
// can be the payoff for player i and every other player gets at least x_j.
void check_family(const Game& g, const Requirement& lambda, int i, int u, const PunishmentFamily& f)
{
    auto bad = [&](const std::string& why) {
        throw GameError("punishment family at " + g.names[u] + ": " + why);
    };
    int n = g.n();
    if (f.h.empty() || f.c.empty() || f.h.front() != u || f.c.back() != f.h.back())
        bad("h must start at the vertex and c must close on h's last vertex");
    if (!distinct(f.h) || !distinct(f.c))
        bad("h and c must be simple");
    for (std::size_t k = 0; k + 1 < f.h.size(); ++k)
        if (!g.has_edge(f.h[k], f.h[k + 1]))
            bad("h is not a path");
    int prev = f.h.back();
    for (int x : f.c) {
        if (!g.has_edge(prev, x))
            bad("c is not a cycle");
        prev = x;
    }
    if ((int)f.x.size() != g.p())
        bad("payoff vector has the wrong size");
    Mask in(n, 0);
    for (int w : f.W)
        if (w < 0 || w >= n)
            bad("W references an unknown vertex");
        else
            in[w] = 1;
    Adj adj(n);
    for (int v = 0; v < n; ++v)
        adj[v] = g.succ(v);
    int k = 0;
    auto comp = scc(adj, in, k);
    if (k == 0)
        bad("W is empty");
    // chain: component c reaches c-1 directly, last (0) is the sink
    for (int c = k - 1; c > 0; --c) {
        bool link = false;
        for (int v = 0; v < n && !link; ++v)
            if (comp[v] == c)
                for (int w : adj[v])
                    if (comp[w] == c - 1)
                        link = true;
        if (!link)
            bad("W is not visited by a single play");
    }
    bool entry = false;
    for (int s : g.succ(f.h.back()))
        if (in[s] && comp[s] == k - 1)
            entry = true;
    if (!entry)
        bad("W is not entered from the end of c");
    std::vector<int> es;
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (comp[g.edges[e].from] == 0 && comp[g.edges[e].to] == 0)
            es.push_back(e);
    if (es.empty())
        bad("the last component of W has no cycle");
    LinearProgram lp;
    for (std::size_t e = 0; e < es.size(); ++e)
        lp.add_var();
    std::vector<std::pair<int, Q>> one;
    for (std::size_t e = 0; e < es.size(); ++e)
        one.push_back({(int)e, Q(1)});
    lp.add_row(one, LinearProgram::EQ, Q(1));
    for (int v = 0; v < n; ++v) {
        if (comp[v] != 0)
            continue;
        std::vector<std::pair<int, Q>> row;
        for (std::size_t e = 0; e < es.size(); ++e) {
            const auto& ed = g.edges[es[e]];
            if (ed.to == v && ed.from != v)
                row.push_back({(int)e, Q(1)});
            if (ed.from == v && ed.to != v)
                row.push_back({(int)e, Q(-1)});
        }
        if (!row.empty())
            lp.add_row(row, LinearProgram::EQ, Q(0));
    }
    for (int j = 0; j < g.p(); ++j) {
        std::vector<std::pair<int, Q>> row;
        for (std::size_t e = 0; e < es.size(); ++e)
            row.push_back({(int)e, g.edges[es[e]].reward[j]});
        lp.add_row(row, j == i ? LinearProgram::EQ : LinearProgram::GE, f.x[j]);
    }
    if (solve_lp(lp).status != LpStatus::optimal)
        bad("payoff vector not achievable in W");
    std::vector<int> occ = f.h;
    occ.insert(occ.end(), f.c.begin(), f.c.end());
    occ.insert(occ.end(), f.W.begin(), f.W.end());
    for (int v : occ)
        if (g.controlled(v) && ExtRat(f.x[g.owner[v]]) < lambda[v])
            bad("not consistent with the requirement at " + g.names[v]);
}

struct DevEdge {
    int to;
    Q w;
    int len;
    bool post;
};

}

bool mp_deviation_graph_value(const Game& g, const Requirement& lambda, int i, int v,
                              const ReducedStrategy& tau, const Q& alpha)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("deviation graph needs a mean-payoff game");
    int n = g.n();
    std::vector<std::vector<DevEdge>> out(n);
    Mask seen(n, 0);
    std::vector<int> todo{v};
    seen[v] = 1;
    while (!todo.empty()) {
        int u = todo.back();
        todo.pop_back();
        auto it = tau.find(u);
        if (it == tau.end())
            return false;
        const PunishmentFamily& f = it->second;
        check_family(g, lambda, i, u, f);
        if (f.x[i] > alpha)
            return false;
        std::vector<int> hc = f.h;
        hc.insert(hc.end(), f.c.begin(), f.c.end());
        Q run = 0;
        for (std::size_t m = 0; m < hc.size(); ++m) {
            if (m > 0)
                run += g.edges[g.edge(hc[m - 1], hc[m])].reward[i];
            if (g.owner[hc[m]] != i)
                continue;
            for (int e : g.out[hc[m]])
                out[u].push_back({g.edges[e].to, run + g.edges[e].reward[i], (int)m + 1, false});
        }
        Q label = cycle_mean(g, f.c, i);
        for (int w : f.W)
            if (g.owner[w] == i)
                for (int s : g.succ(w))
                    out[u].push_back({s, label, 0, true});
        for (const auto& d : out[u])
            if (!seen[d.to]) {
                seen[d.to] = 1;
                todo.push_back(d.to);
            }
    }
    // cycles of pre-cycle deviations only
    {
        std::vector<WEdge> es;
        int extra = n;
        for (int u = 0; u < n; ++u)
            for (const auto& d : out[u]) {
                if (d.post)
                    continue;
                int prev = u;
                for (int s = 1; s < d.len; ++s) {
                    es.push_back({prev, extra, s == 1 ? d.w : Q(0)});
                    prev = extra++;
                }
                es.push_back({prev, d.to, d.len == 1 ? d.w : Q(0)});
            }
        auto best = max_mean_cycle(extra, es);
        if (best && best->value > alpha)
            return false;
    }
    // cycles through post-cycle deviations, all with a label above alpha
    {
        Adj adj(n);
        std::vector<std::pair<int, int>> hot;
        for (int u = 0; u < n; ++u)
            for (const auto& d : out[u]) {
                if (d.post && d.w <= alpha)
                    continue;
                adj[u].push_back(d.to);
                if (d.post)
                    hot.push_back({u, d.to});
            }
        int k = 0;
        auto comp = scc(adj, seen, k);
        for (auto [a, b] : hot)
            if (comp[a] >= 0 && comp[a] == comp[b])
                return false;
    }
    return true;
}

json witness_to_json(const Game& g, const MpWitness& w)
{
    auto names = [&](const std::vector<int>& vs) {
        json a = json::array();
        for (int v : vs)
            a.push_back(g.names[v]);
        return a;
    };
    json j;
    j["W"] = names(w.play.W);
    j["Wp"] = names(w.play.Wp);
    json alpha = json::object();
    for (int p = 0; p < g.p(); ++p) {
        json row = json::object();
        for (std::size_t c = 0; c < w.play.cycles.size(); ++c)
            if (w.play.alpha[p][c] != 0)
                row[cycle_id(g, w.play.cycles[c])] = q_str(w.play.alpha[p][c]);
        alpha[g.players[p]] = row;
    }
    j["alpha"] = alpha;
    json pay = json::object();
    for (int p = 0; p < g.p(); ++p)
        pay[g.players[p]] = q_str(w.play.payoff[p]);
    j["payoff"] = pay;
    j["lambda"] = requirement_to_json(g, w.lambda);
    json prover = json::object();
    for (auto& [v, tau] : w.prover) {
        json s = json::object();
        for (auto& [u, f] : tau) {
            json x = json::object();
            for (int p = 0; p < g.p(); ++p)
                x[g.players[p]] = q_str(f.x[p]);
            s[g.names[u]] = {{"h", names(f.h)}, {"c", names(f.c)}, {"W", names(f.W)}, {"x", x}};
        }
        prover[g.names[v]] = s;
    }
    j["prover"] = prover;
    return j;
}

MpWitness witness_from_json(const Game& g, const json& j)
{
    try {
        auto verts = [&](const json& a) {
            std::vector<int> r;
            for (const auto& x : a)
                r.push_back(g.vertex(x.get<std::string>()));
            return r;
        };
        auto vec = [&](const json& o) {
            std::vector<Q> r(g.p(), Q(0));
            for (auto& [k, val] : o.items())
                r[g.player(k)] = parse_q(val.get<std::string>());
            return r;
        };
        MpWitness w;
        w.play.W = verts(j.at("W"));
        w.play.Wp = verts(j.at("Wp"));
        std::map<std::vector<int>, int> ids;
        std::vector<std::vector<std::pair<int, Q>>> rows(g.p());
        for (auto& [pl, row] : j.at("alpha").items()) {
            int p = g.player(pl);
            for (auto& [cid, val] : row.items()) {
                auto cy = parse_lasso(g, "(" + cid + ")").cycle;
                if (!ids.count(cy)) {
                    ids[cy] = (int)w.play.cycles.size();
                    w.play.cycles.push_back(cy);
                }
                rows[p].push_back({ids[cy], parse_q(val.get<std::string>())});
            }
        }
        w.play.alpha.assign(g.p(), std::vector<Q>(w.play.cycles.size(), Q(0)));
        for (int p = 0; p < g.p(); ++p)
            for (auto& [c, a] : rows[p])
                w.play.alpha[p][c] += a;
        if (j.contains("payoff"))
            w.play.payoff = vec(j.at("payoff"));
        w.lambda = requirement_from_json(g, j.at("lambda"));
        for (auto& [vn, s] : j.at("prover").items()) {
            ReducedStrategy tau;
            for (auto& [un, f] : s.items())
                tau[g.vertex(un)] = PunishmentFamily{verts(f.at("h")), verts(f.at("c")), verts(f.at("W")), vec(f.at("x"))};
            w.prover[g.vertex(vn)] = std::move(tau);
        }
        return w;
    } catch (const json::exception& e) {
        throw GameError(std::string("malformed witness: ") + e.what());
    }
}

bool check_mp_witness(const Game& g, const Q& eps, const MpWitness& w, const Thresholds& t)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("mean-payoff witness needs a mean-payoff game");
    if (g.init < 0)
        throw GameError("witness check needs an initial vertex");
    int n = g.n();
    const MpPlay& p = w.play;
    if ((int)w.lambda.size() != n)
        throw GameError("malformed witness: requirement size");
    if ((int)p.alpha.size() != g.p())
        throw GameError("malformed witness: one combination per player expected");
    for (const auto& row : p.alpha) {
        Q s = 0;
        for (const Q& a : row) {
            if (a < 0)
                throw GameError("malformed witness: negative weight");
            s += a;
        }
        if (s != 1)
            throw GameError("malformed witness: weights of a player must sum to 1");
    }
    for (const auto& cy : p.cycles)
        if (cy.empty() || !distinct(cy))
            throw GameError("malformed witness: cycles must be simple");

    // the play
    Mask inW(n, 0), inWp(n, 0);
    for (int v : p.W)
        inW[v] = 1;
    for (int v : p.Wp)
        inWp[v] = 1;
    for (int v : p.W)
        if (!inWp[v])
            return false;
    if (p.W.empty())
        return false;
    Adj adj(n);
    for (int v = 0; v < n; ++v)
        adj[v] = g.succ(v);
    int k = 0;
    scc(adj, inW, k);
    if (k != 1 || nontrivial_sccs(adj, inW).empty())
        return false;
    if (!inWp[g.init])
        return false;
    if (!reachable(adj, g.init, inWp)[p.W[0]])
        return false;
    for (const auto& cy : p.cycles)
        for (std::size_t m = 0; m < cy.size(); ++m)
            if (!inW[cy[m]] || !g.has_edge(cy[m], cy[(m + 1) % cy.size()]))
                return false;
    std::vector<Q> z = seal_payoff(g, p.cycles, p.alpha);
    std::vector<ExtRat> ze(z.begin(), z.end());
    if (!within(t, ze))
        return false;
    for (int v : p.Wp)
        if (g.controlled(v) && ze[g.owner[v]] < w.lambda[v])
            return false;

    // the requirement is an eps-fixed point, held by the Prover strategies
    for (int v = 0; v < n; ++v) {
        if (!g.controlled(v) || w.lambda[v].is_pos_inf())
            continue;
        if (w.lambda[v].is_neg_inf())
            return false;
        auto it = w.prover.find(v);
        if (it == w.prover.end())
            return false;
        if (!mp_deviation_graph_value(g, w.lambda, g.owner[v], v, it->second, w.lambda[v].value() + eps))
            return false;
    }
    return true;
}

SpeMp spe_exists_mp(const Game& g, const Q& eps, const Thresholds& t, int max_iters)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("spe_exists_mp needs a mean-payoff game");
    if (g.init < 0)
        throw GameError("constrained existence needs an initial vertex");
    if (eps < 0)
        throw GameError("epsilon must be non-negative");
    auto seq = nego_iterate(g, max_iters, eps);
    SpeMp r;
    r.lambda = seq.iterates.back();
    r.iterations = (int)seq.iterates.size() - 1;
    if (r.lambda[g.init].is_pos_inf()) {
        r.answer = Answer::no;
        return r;
    }
    if (!seq.converged) {
        r.answer = Answer::unknown;
        return r;
    }
    auto play = find_consistent_mp(g, r.lambda, g.init, t);
    if (!play) {
        r.answer = Answer::no;
        return r;
    }
    MpWitness w;
    w.play = *play;
    w.lambda = r.lambda;
    auto full = nego_mp_full(g, r.lambda, true);
    w.prover = std::move(full.strategy);
    r.witness = std::move(w);
    r.answer = Answer::yes;
    return r;
}

EpsMin epsilon_min_search(const Game& g, int precision, int max_iters)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("epsilon search needs a mean-payoff game");
    Thresholds open = open_thresholds(g);
    auto pred = [&](const Q& e) { return spe_exists_mp(g, e, open, max_iters).answer; };
    EpsMin r;
    Answer a0 = pred(Q(0));
    if (a0 == Answer::unknown)
        return r;
    if (a0 == Answer::yes) {
        r.answer = Answer::yes;
        r.value = 0;
        return r;
    }
    std::optional<Q> lo_r, hi_r;
    for (const auto& e : g.edges)
        for (const Q& x : e.reward) {
            if (!lo_r || x < *lo_r)
                lo_r = x;
            if (!hi_r || x > *hi_r)
                hi_r = x;
        }
    Q lo = 0, hi = hi_r ? Q(*hi_r - *lo_r) : Q(0);
    if (hi == 0 || pred(hi) != Answer::yes)
        return r;
    for (int s = 0; s < precision; ++s) {
        Q mid = (lo + hi) / 2;
        Answer a = pred(mid);
        if (a == Answer::unknown)
            return r;
        (a == Answer::yes ? hi : lo) = mid;
    }
    // the simplest rational in (lo, hi] that works
    for (;;) {
        Q c;
        for (long q = 1;; ++q) {
            mpz_class p = Q(lo * q).get_num() / Q(lo * q).get_den() + 1;
            Q cand(p, q);
            cand.canonicalize();
            if (cand <= hi) {
                c = cand;
                break;
            }
        }
        Answer a = pred(c);
        if (a == Answer::unknown)
            return r;
        if (a == Answer::yes) {
            r.answer = Answer::yes;
            r.value = c;
            return r;
        }
        lo = c;
    }
}

}
