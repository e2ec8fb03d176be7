#include "equilibra/chain.hpp"
#include "equilibra/graph.hpp"

#include <deque>
#include <map>

namespace eq {

Chain induced_chain(const Game& g, const Memory& prof)
{
    if (g.init < 0)
        throw GameError("induced chain needs an initial vertex");
    Chain c;
    std::map<std::pair<int, int>, int> id;
    std::deque<int> todo;
    auto get = [&](int v, int q) {
        auto it = id.find({v, q});
        if (it != id.end())
            return it->second;
        int k = c.size();
        c.vertex.push_back(v);
        c.mem.push_back(q);
        c.next.emplace_back();
        id[{v, q}] = k;
        todo.push_back(k);
        return k;
    };
    c.init = get(g.init, prof.initial);
    while (!todo.empty()) {
        int k = todo.front();
        todo.pop_front();
        int v = c.vertex[k], q = c.mem[k];
        if (g.owner[v] == TERMINAL)
            continue;
        auto en = prof.enabled(g, q, v);
        if (en.empty())
            throw GameError("profile has no transition at " + prof.states[q] + "/" + g.names[v]);
        std::map<int, Q> acc;
        if (g.controlled(v)) {
            if (!prof.controls(g, v))
                throw GameError("profile does not cover vertex " + g.names[v]);
            for (auto& [t, w] : en)
                acc[get(t->emit, t->to)] += w;
        } else {
            for (auto& [t, w] : en)
                for (int e : g.out[v])
                    acc[get(g.edges[e].to, t->to)] += w * g.edges[e].prob;
        }
        for (auto& [s, w] : acc)
            c.next[k].push_back({s, w});
    }
    return c;
}

std::vector<Q> solve_linear(std::vector<std::vector<Q>> a, std::vector<Q> b)
{
    int n = (int)b.size();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            throw std::runtime_error("singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0)
                continue;
            Q f = a[r][col] / a[col][col];
            for (int k = col; k < n; ++k)
                a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    std::vector<Q> x(n);
    for (int r = 0; r < n; ++r)
        x[r] = b[r] / a[r][r];
    return x;
}

std::vector<Q> absorption(const Chain& c)
{
    int n = c.size();
    Adj adj(n), radj(n);
    std::vector<int> absorbing;
    for (int s = 0; s < n; ++s) {
        if (c.next[s].empty())
            absorbing.push_back(s);
        for (auto& [t, w] : c.next[s]) {
            adj[s].push_back(t);
            radj[t].push_back(s);
        }
    }
    Mask reach = reachable(adj, c.init);
    std::vector<Q> res(n, Q(0));
    // transient states that can still be absorbed
    Mask live = reachable(radj, absorbing);
    std::vector<int> idx(n, -1), tr;
    for (int s = 0; s < n; ++s)
        if (reach[s] && live[s] && !c.next[s].empty()) {
            idx[s] = (int)tr.size();
            tr.push_back(s);
        }
    if (c.next[c.init].empty()) {
        res[c.init] = 1;
        return res;
    }
    if (idx[c.init] < 0)
        return res;
    int m = (int)tr.size();
    for (int t : absorbing) {
        if (!reach[t])
            continue;
        std::vector<std::vector<Q>> a(m, std::vector<Q>(m, Q(0)));
        std::vector<Q> b(m, Q(0));
        for (int r = 0; r < m; ++r) {
            a[r][r] = 1;
            for (auto& [s2, w] : c.next[tr[r]]) {
                if (s2 == t)
                    b[r] += w;
                else if (idx[s2] >= 0)
                    a[r][idx[s2]] -= w;
            }
        }
        auto x = solve_linear(a, b);
        res[t] = x[idx[c.init]];
    }
    return res;
}

bool may_run_forever(const Chain& c)
{
    int n = c.size();
    Adj adj(n);
    for (int s = 0; s < n; ++s)
        for (auto& [t, w] : c.next[s])
            adj[s].push_back(t);
    Mask reach = reachable(adj, c.init);
    int k = 0;
    auto comp = scc(adj, reach, k);
    std::vector<char> bottom(k, 1), has_abs(k, 0);
    for (int s = 0; s < n; ++s) {
        if (comp[s] < 0)
            continue;
        if (c.next[s].empty())
            has_abs[comp[s]] = 1;
        for (int t : adj[s])
            if (comp[t] != comp[s])
                bottom[comp[s]] = 0;
    }
    for (int x = 0; x < k; ++x)
        if (bottom[x] && !has_abs[x])
            return true;
    return false;
}

std::vector<std::pair<Q, Q>> payoff_distribution(const Game& g, const Chain& c, int i)
{
    auto ab = absorption(c);
    std::map<Q, Q> d;
    Q tot = 0;
    for (int s = 0; s < c.size(); ++s)
        if (ab[s] != 0) {
            d[g.payoff[c.vertex[s]][i]] += ab[s];
            tot += ab[s];
        }
    if (tot != 1)
        d[Q(0)] += 1 - tot;
    return {d.begin(), d.end()};
}

}
