#include "equilibra/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace eq {

Product product_game(const Game& g, const Memory& m)
{
    if (g.mode == Mode::terminal || g.mode == Mode::discounted)
        throw GameError(std::string("product game not supported in mode ") + mode_name(g.mode));
    if (g.init < 0)
        throw GameError("product game needs an initial vertex");
    if (m.owners.size() != 1)
        throw GameError("product game needs a memory structure for exactly one Leader");
    m.validate(g);
    for (int v = 0; v < g.n(); ++v)
        if (g.owner[v] == CHANCE)
            throw GameError("product game over chance vertices is not supported");

    Product pr;
    pr.leader = m.owners[0];
    Game& x = pr.game;
    x.players = g.players;
    std::string dname = "Demon";
    while (std::find(x.players.begin(), x.players.end(), dname) != x.players.end())
        dname += "'";
    x.players.push_back(dname);
    pr.demon = x.p() - 1;
    x.mode = g.mode;

    std::map<std::tuple<int, int, int>, int> id;
    std::deque<int> todo;
    auto get = [&](int v, int p, int q) {
        auto key = std::tuple(v, p, q);
        auto it = id.find(key);
        if (it != id.end())
            return it->second;
        std::string nm = g.names[v] + "|" + m.states[p];
        int own = pr.demon;
        if (q >= 0) {
            nm += "|" + m.states[q];
            if (g.owner[v] != pr.leader)
                own = g.owner[v];
        }
        int k = x.add_vertex(nm, own);
        if (x.mode == Mode::parity) {
            x.color[k] = g.color[v];
            x.color[k].push_back(1);
        }
        pr.base.push_back(v);
        pr.from_q.push_back(p);
        pr.to_q.push_back(q);
        id[key] = k;
        todo.push_back(k);
        return k;
    };

    auto set_reward = [&](int e, int u, int v) {
        if (!x.weighted())
            return;
        int be = g.edge(u, v);
        for (int i = 0; i < g.p(); ++i) {
            const Q& r = g.edges[be].reward[i];
            // one base step is two product steps
            x.edges[e].reward[i] = x.mode == Mode::mean_payoff ? Q(2 * r) : r;
        }
        x.edges[e].reward[pr.demon] = x.mode == Mode::energy ? Q(-1) : Q(0);
    };

    x.init = get(g.init, m.initial, -1);
    std::set<std::pair<int, int>> made;
    auto link = [&](int a, int b) {
        if (made.insert({a, b}).second)
            return x.add_edge(a, b);
        return -1;
    };
    while (!todo.empty()) {
        int k = todo.front();
        todo.pop_front();
        int v = pr.base[k], p = pr.from_q[k], q = pr.to_q[k];
        if (q < 0) {
            for (const auto& t : m.trans)
                if (t.from == p && t.reads == v) {
                    int e = link(k, get(v, p, t.to));
                    if (e >= 0 && x.mode == Mode::energy)
                        x.edges[e].reward[pr.demon] = -1;
                }
        } else if (g.owner[v] == pr.leader) {
            for (const auto& t : m.trans)
                if (t.from == p && t.reads == v && t.to == q) {
                    int e = link(k, get(t.emit, q, -1));
                    if (e >= 0)
                        set_reward(e, v, t.emit);
                }
        } else {
            for (int w : g.succ(v)) {
                int e = link(k, get(w, q, -1));
                if (e >= 0)
                    set_reward(e, v, w);
            }
        }
    }
    x.payoff.assign(x.n(), {});
    x.validate();
    return pr;
}

DeviationGame deviation_game(const Game& g, const Memory& m, int player)
{
    if (g.init < 0)
        throw GameError("deviation game needs an initial vertex");
    m.validate(g);
    const bool stochastic = g.mode == Mode::terminal;
    DeviationGame d;
    Game& x = d.game;
    x.players = g.players;
    x.mode = g.mode;
    x.discount = g.discount;
    std::map<std::pair<int, int>, int> id;
    std::deque<int> todo;
    auto get = [&](int v, int q) {
        auto it = id.find({v, q});
        if (it != id.end())
            return it->second;
        int own = g.owner[v];
        if (own >= 0 && own != player)
            own = stochastic ? CHANCE : player;
        int k = x.add_vertex(g.names[v] + "|" + m.states[q], own);
        if (x.mode == Mode::parity)
            x.color[k] = g.color[v];
        x.payoff[k] = g.payoff[v];
        d.base.push_back(v);
        d.mem.push_back(q);
        id[{v, q}] = k;
        todo.push_back(k);
        return k;
    };
    auto reward = [&](int e, int u, int v) {
        if (x.weighted())
            x.edges[e].reward = g.edges[g.edge(u, v)].reward;
    };
    x.init = get(g.init, m.initial);
    while (!todo.empty()) {
        int k = todo.front();
        todo.pop_front();
        int v = d.base[k], q = d.mem[k];
        if (g.owner[v] == TERMINAL)
            continue;
        auto en = m.enabled(g, q, v);
        if (en.empty())
            throw GameError("profile has no transition at " + m.states[q] + "/" + g.names[v]);
        if (!stochastic && en.size() > 1)
            throw GameError("profile must be deterministic outside terminal mode");
        std::map<int, Q> acc;
        if (g.owner[v] == player) {
            std::map<int, Q> next_q;
            for (auto& [t, w] : en)
                next_q[t->to] += w;
            for (int w : g.succ(v)) {
                if (next_q.size() == 1) {
                    int e = x.add_edge(k, get(w, next_q.begin()->first));
                    reward(e, v, w);
                    continue;
                }
                int mid = x.add_vertex(x.names[k] + ">" + g.names[w], CHANCE);
                x.payoff[mid] = {};
                d.base.push_back(-1);
                d.mem.push_back(-1);
                int e = x.add_edge(k, mid);
                reward(e, v, w);
                for (auto& [q2, pr] : next_q) {
                    int f = x.add_edge(mid, get(w, q2));
                    x.edges[f].prob = pr;
                }
            }
            continue;
        }
        if (g.controlled(v)) {
            if (!m.controls(g, v))
                throw GameError("profile does not cover vertex " + g.names[v]);
            for (auto& [t, w] : en)
                acc[get(t->emit, t->to)] += w;
        } else {
            for (auto& [t, w] : en)
                for (int e : g.out[v])
                    acc[get(g.edges[e].to, t->to)] += w * g.edges[e].prob;
        }
        for (auto& [s, pr] : acc) {
            int e = x.add_edge(k, s);
            if (x.owner[k] == CHANCE)
                x.edges[e].prob = pr;
            reward(e, v, d.base[s]);
        }
    }
    x.validate();
    return d;
}

Game add_shadow_player(const Game& g, int copy, const std::string& name)
{
    Game x = g;
    x.players.push_back(name);
    for (auto& e : x.edges)
        if (!e.reward.empty())
            e.reward.push_back(e.reward[copy]);
    for (auto& c : x.color)
        c.push_back(c[copy]);
    for (auto& pf : x.payoff)
        if (!pf.empty())
            pf.push_back(pf[copy]);
    x.validate();
    return x;
}

}
