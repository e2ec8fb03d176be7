#include "equilibra/graph.hpp"

#include <algorithm>
#include <functional>

namespace eq {

Adj adjacency_of(int n, const std::vector<std::pair<int, int>>& edges)
{
    Adj a(n);
    for (auto [u, v] : edges)
        a[u].push_back(v);
    return a;
}

Mask full_mask(int n) { return Mask(n, 1); }

int count(const Mask& m) { return (int)std::count(m.begin(), m.end(), 1); }

Mask reachable(const Adj& adj, const std::vector<int>& from, const Mask& allowed)
{
    int n = (int)adj.size();
    Mask seen(n, 0);
    std::vector<int> st;
    for (int v : from)
        if ((allowed.empty() || allowed[v]) && !seen[v]) {
            seen[v] = 1;
            st.push_back(v);
        }
    while (!st.empty()) {
        int u = st.back();
        st.pop_back();
        for (int w : adj[u])
            if (!seen[w] && (allowed.empty() || allowed[w])) {
                seen[w] = 1;
                st.push_back(w);
            }
    }
    return seen;
}

Mask reachable(const Adj& adj, int from, const Mask& allowed)
{
    return reachable(adj, std::vector<int>{from}, allowed);
}

std::vector<int> scc(const Adj& adj, const Mask& allowed, int& ncomp)
{
    int n = (int)adj.size();
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on(n, 0);
    std::vector<int> st;
    int counter = 0;
    ncomp = 0;
    auto in = [&](int v) { return allowed.empty() || allowed[v]; };
    std::function<void(int)> visit = [&](int v) {
        idx[v] = low[v] = counter++;
        st.push_back(v);
        on[v] = 1;
        for (int w : adj[v]) {
            if (!in(w))
                continue;
            if (idx[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on[w]) {
                low[v] = std::min(low[v], idx[w]);
            }
        }
        if (low[v] == idx[v]) {
            int w;
            do {
                w = st.back();
                st.pop_back();
                on[w] = 0;
                comp[w] = ncomp;
            } while (w != v);
            ++ncomp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (in(v) && idx[v] < 0)
            visit(v);
    return comp;
}

std::vector<std::vector<int>> nontrivial_sccs(const Adj& adj, const Mask& allowed)
{
    int k = 0;
    auto comp = scc(adj, allowed, k);
    std::vector<std::vector<int>> parts(k);
    for (int v = 0; v < (int)adj.size(); ++v)
        if (comp[v] >= 0)
            parts[comp[v]].push_back(v);
    std::vector<std::vector<int>> res;
    for (auto& p : parts) {
        bool cyc = p.size() > 1;
        if (!cyc)
            for (int w : adj[p[0]])
                cyc |= w == p[0];
        if (cyc)
            res.push_back(p);
    }
    return res;
}

}
