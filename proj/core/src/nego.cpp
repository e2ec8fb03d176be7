#include "equilibra/nego.hpp"
#include "equilibra/graph.hpp"
#include "equilibra/lp.hpp"
#include "equilibra/zs.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

namespace eq {

Requirement vacuous_requirement(const Game& g) { return Requirement(g.n(), ExtRat::neg_inf()); }

bool is_lambda_consistent(const Game& g, const Requirement& lambda, const Lasso& l)
{
    check_lasso(g, l);
    std::size_t total = l.prefix.size() + l.cycle.size();
    for (std::size_t k = 0; k < total; ++k) {
        int v = k < l.prefix.size() ? l.prefix[k] : l.cycle[k - l.prefix.size()];
        if (!g.controlled(v) || lambda[v].is_neg_inf())
            continue;
        if (eval_lasso(g, lasso_suffix(l, k), g.owner[v]) < lambda[v])
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- concrete arena

std::string ConcreteArena::name(const Game& g, int k) const
{
    const Node& nd = nodes[k];
    std::string s = "(";
    if (!nd.prover)
        s += g.names[nd.from];
    s += g.names[nd.v] + ", {";
    for (std::size_t j = 0; j < nd.memory.size(); ++j) {
        if (j)
            s += ",";
        int m = nd.memory[j];
        if (!compressed)
            s += g.names[m];
        else
            s += m == g.p() ? std::string("inf") : g.players[m];
    }
    s += "})";
    if (nd.flag)
        s += "'";
    return s;
}

namespace {

std::vector<int> contribution(const Game& g, const Requirement& lambda, int w)
{
    if (!g.controlled(w) || lambda[w] <= ExtRat(0))
        return {};
    if (lambda[w] > ExtRat(1))
        return {g.p()};
    return {g.owner[w]};
}

std::vector<int> set_union(std::vector<int> a, const std::vector<int>& b)
{
    for (int x : b)
        if (std::find(a.begin(), a.end(), x) == a.end())
            a.push_back(x);
    std::sort(a.begin(), a.end());
    return a;
}

}

ConcreteArena build_concrete_nego(const Game& g, const Requirement& lambda, int player,
                                  const std::vector<int>& origins, bool compress)
{
    if (g.mode != Mode::parity && g.mode != Mode::mean_payoff)
        throw GameError(std::string("concrete negotiation game needs a prefix-independent mode, not ") +
                        mode_name(g.mode));
    ConcreteArena a;
    a.compressed = compress;
    a.player = player;
    a.origins = origins;
    std::map<std::tuple<bool, int, int, std::vector<int>, int>, int> id;
    std::deque<int> todo;
    auto get = [&](bool prover, int from, int v, std::vector<int> mem, int flag) {
        auto key = std::make_tuple(prover, from, v, mem, flag);
        auto it = id.find(key);
        if (it != id.end())
            return it->second;
        int k = a.size();
        a.nodes.push_back(ConcreteArena::Node{prover, from, v, std::move(mem), flag});
        a.succ.emplace_back();
        id[key] = k;
        todo.push_back(k);
        return k;
    };
    auto start = [&](int w) {
        return compress ? contribution(g, lambda, w) : std::vector<int>{w};
    };
    for (int v0 : origins)
        a.roots.push_back(get(true, -1, v0, start(v0), 0));
    while (!todo.empty()) {
        int k = todo.front();
        todo.pop_front();
        auto nd = a.nodes[k];
        if (nd.prover) {
            for (int w : g.succ(nd.v)) {
                int t = get(false, nd.v, w, nd.memory, 0);
                a.succ[k].push_back({t, ConcreteArena::PROPOSAL});
            }
            continue;
        }
        int acc = get(true, -1, nd.v, set_union(nd.memory, start(nd.v)), 0);
        a.succ[k].push_back({acc, ConcreteArena::ACCEPTATION});
        if (g.owner[nd.from] != player)
            continue;
        for (int w : g.succ(nd.from))
            if (w != nd.v) {
                int t = get(true, -1, w, start(w), compress ? 1 : 0);
                a.succ[k].push_back({t, ConcreteArena::DEVIATION});
            }
    }
    return a;
}

ConcreteArena build_concrete_nego(const Game& g, const Requirement& lambda, int player, int v0, bool compress)
{
    return build_concrete_nego(g, lambda, player, std::vector<int>{v0}, compress);
}

// ---------------------------------------------------------------- parity

Requirement nego_parity(const Game& g, const Requirement& lambda)
{
    if (g.mode != Mode::parity)
        throw GameError("nego_parity needs a parity game");
    for (int v = 0; v < g.n(); ++v) {
        const ExtRat& l = lambda[v];
        if (l.finite() && l != ExtRat(0) && l != ExtRat(1))
            throw GameError("parity requirements take values in {-inf, 0, 1, +inf}");
    }
    Requirement res(g.n(), ExtRat::neg_inf());
    int big = 0;
    for (int v = 0; v < g.n(); ++v)
        for (int c : g.color[v])
            big = std::max(big, c + 4);
    for (int i = 0; i < g.p(); ++i) {
        std::vector<int> origins;
        for (int v = 0; v < g.n(); ++v)
            if (g.owner[v] == i)
                origins.push_back(v);
        if (origins.empty())
            continue;
        auto a = build_concrete_nego(g, lambda, i, origins, true);
        int n = a.size();
        Adj succ(n);
        Mask challenger(n, 0);
        for (int k = 0; k < n; ++k) {
            challenger[k] = !a.nodes[k].prover;
            for (auto& [t, tag] : a.succ[k])
                succ[k].push_back(t);
        }
        auto has = [](const std::vector<int>& m, int x) { return std::find(m.begin(), m.end(), x) != m.end(); };
        std::vector<std::vector<int>> dims;
        for (int j = 0; j <= g.p(); ++j) {
            std::vector<int> col(n, big);
            for (int k = 0; k < n; ++k) {
                const auto& nd = a.nodes[k];
                if (!nd.prover)
                    continue;
                if (nd.flag || !has(nd.memory, j))
                    col[k] = 1;
                else
                    col[k] = j == g.p() ? 2 : g.color[nd.v][j] + 3;
            }
            dims.push_back(std::move(col));
        }
        Mask inf_win = solve_generalized_parity(succ, challenger, dims);
        std::vector<int> own(n, big);
        for (int k = 0; k < n; ++k)
            if (a.nodes[k].prover)
                own[k] = g.color[a.nodes[k].v][i];
        dims.push_back(std::move(own));
        Mask one_win = solve_generalized_parity(succ, challenger, dims);
        for (std::size_t r = 0; r < origins.size(); ++r) {
            int k = a.roots[r];
            res[origins[r]] = inf_win[k] ? ExtRat::pos_inf() : one_win[k] ? ExtRat(1) : ExtRat(0);
        }
    }
    return res;
}

// ---------------------------------------------------------------- mean-payoff

namespace {

using Bits = unsigned long long;

struct Tail {
    Bits W = 0;
    Bits K = 0;
};

Bits closure(const std::vector<Bits>& adj, int s, Bits within)
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

// sets W visited exactly by some play from s: the components of G[W] form a
// chain from the one of s to a sink K containing a cycle
std::vector<std::vector<Tail>> all_tails(const Game& g)
{
    int n = g.n();
    if (n > 16)
        throw GameError("mean-payoff negotiation is limited to 16 vertices");
    std::vector<Bits> adj(n, 0);
    for (const auto& e : g.edges)
        adj[e.from] |= Bits(1) << e.to;
    std::vector<std::vector<Tail>> res(n);
    for (Bits W = 1; W < (Bits(1) << n); ++W) {
        std::vector<Bits> R(n, 0);
        for (Bits f = W; f; f &= f - 1) {
            int v = __builtin_ctzll(f);
            R[v] = closure(adj, v, W);
        }
        bool chain = true;
        for (Bits f = W; f && chain; f &= f - 1) {
            int v = __builtin_ctzll(f);
            for (Bits h = f & (f - 1); h; h &= h - 1) {
                int w = __builtin_ctzll(h);
                if (!((R[v] >> w) & 1) && !((R[w] >> v) & 1)) {
                    chain = false;
                    break;
                }
            }
        }
        if (!chain)
            continue;
        Bits K = 0;
        for (Bits f = W; f; f &= f - 1) {
            int v = __builtin_ctzll(f);
            Bits comp = 0;
            for (Bits h = R[v]; h; h &= h - 1) {
                int w = __builtin_ctzll(h);
                if ((R[w] >> v) & 1)
                    comp |= Bits(1) << w;
            }
            if (comp == R[v]) {
                K = comp;
                break;
            }
        }
        bool cyc = __builtin_popcountll(K) > 1;
        if (!cyc) {
            int k = __builtin_ctzll(K);
            cyc = (adj[k] >> k) & 1;
        }
        if (!cyc)
            continue;
        for (Bits f = W; f; f &= f - 1) {
            int s = __builtin_ctzll(f);
            if (R[s] == W)
                res[s].push_back(Tail{W, K});
        }
    }
    return res;
}

std::vector<int> bits_list(Bits b)
{
    std::vector<int> r;
    for (; b; b &= b - 1)
        r.push_back(__builtin_ctzll(b));
    return r;
}

// least payoff of player i over plays staying in K whose payoff meets the floor L
std::optional<std::vector<Q>> floor_flow(const Game& g, Bits K, const std::vector<ExtRat>& L, int i)
{
    LinearProgram lp;
    std::vector<int> es;
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (((K >> g.edges[e].from) & 1) && ((K >> g.edges[e].to) & 1)) {
            es.push_back(e);
            lp.add_var();
        }
    std::vector<std::pair<int, Q>> one;
    for (std::size_t k = 0; k < es.size(); ++k)
        one.push_back({(int)k, Q(1)});
    lp.add_row(one, LinearProgram::EQ, Q(1));
    for (int v : bits_list(K)) {
        std::vector<std::pair<int, Q>> row;
        for (std::size_t k = 0; k < es.size(); ++k) {
            const auto& e = g.edges[es[k]];
            if (e.to == v && e.from != v)
                row.push_back({(int)k, Q(1)});
            if (e.from == v && e.to != v)
                row.push_back({(int)k, Q(-1)});
        }
        if (!row.empty())
            lp.add_row(row, LinearProgram::EQ, Q(0));
    }
    for (int j = 0; j < g.p(); ++j) {
        if (!L[j].finite())
            continue;
        std::vector<std::pair<int, Q>> row;
        for (std::size_t k = 0; k < es.size(); ++k)
            row.push_back({(int)k, g.edges[es[k]].reward[j]});
        lp.add_row(row, LinearProgram::GE, L[j].value());
    }
    for (std::size_t k = 0; k < es.size(); ++k)
        lp.objective[k] = g.edges[es[k]].reward[i];
    auto r = solve_lp(lp);
    if (r.status != LpStatus::optimal)
        return std::nullopt;
    std::vector<Q> x(g.p(), Q(0));
    for (std::size_t k = 0; k < es.size(); ++k)
        for (int j = 0; j < g.p(); ++j)
            x[j] += r.x[k] * g.edges[es[k]].reward[j];
    return x;
}

struct PreEdge {
    int to;
    Q w;
    int len;

    bool operator==(const PreEdge&) const = default;
    bool operator<(const PreEdge& o) const
    {
        if (to != o.to)
            return to < o.to;
        if (len != o.len)
            return len < o.len;
        return w < o.w;
    }
};

// a simple lasso from u cut at its entry vertex: h = prefix + a, c = cycle + a
struct Cut {
    int u;
    std::vector<int> h, c;
    std::vector<PreEdge> pre;
    Q label;
};

struct Cand {
    int u;
    int cut;
    Bits W;
    std::vector<Q> x;
    std::vector<int> post;
};

struct BaseResult {
    std::vector<Q> val;        // per Prover node in the subgame
    std::vector<int> choice;   // chosen candidate per Prover node, -1 outside
};

class MpSolver {
public:
    MpSolver(const Game& g, const Requirement& lambda, int player, const std::vector<std::vector<Tail>>& tails)
        : g_(g), lambda_(lambda), i_(player)
    {
        n_ = g.n();
        build_candidates(tails);
    }

    ExtRat value(int u, std::vector<int>* strategy_out)
    {
        std::set<Q> ts;
        for (const auto& c : cands_)
            ts.insert(c.x[i_]);
        for (const auto& k : cuts_)
            ts.insert(k.label);
        std::vector<Q> T(ts.begin(), ts.end());
        int lo = 0, hi = (int)T.size();
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (decide(T[mid]).win[u])
                hi = mid;
            else
                lo = mid + 1;
        }
        std::optional<Q> y;
        if (lo == 0 && !T.empty()) {
            y = T[0];
        } else if (!T.empty()) {
            Q cur = T[lo - 1];
            decide(cur);
            std::optional<Q> upper;
            if (lo < (int)T.size())
                upper = T[lo];
            for (;;) {
                auto it = recorded_.upper_bound(cur);
                if (it == recorded_.end() || (upper && *it >= *upper)) {
                    y = upper;
                    break;
                }
                Q t = *it;
                if (decide(t).win[u]) {
                    y = t;
                    break;
                }
                cur = t;
            }
        }
        if (!y)
            return ExtRat::pos_inf();
        if (strategy_out)
            *strategy_out = decide(*y).choice;
        return ExtRat(*y);
    }

    PunishmentFamily family(int cand) const
    {
        const Cand& c = cands_[cand];
        const Cut& k = cuts_[c.cut];
        return PunishmentFamily{k.h, k.c, bits_list(c.W), c.x};
    }

private:
    struct Decision {
        Mask win;                 // per Prover node
        std::vector<int> choice;  // candidate per winning Prover node
    };

    const Game& g_;
    const Requirement& lambda_;
    int i_;
    int n_;
    std::vector<Cut> cuts_;
    std::vector<Cand> cands_;
    std::vector<std::vector<int>> by_vertex_;
    std::map<Q, Decision> decisions_;
    std::map<std::vector<char>, BaseResult> base_cache_;
    std::set<Q> recorded_;

    void build_candidates(const std::vector<std::vector<Tail>>& tails)
    {
        std::map<std::tuple<Bits, std::vector<ExtRat>>, std::optional<std::vector<Q>>> lp_cache;
        by_vertex_.assign(n_, {});
        for (int u = 0; u < n_; ++u) {
            for (const Lasso& l : simple_lassos(g_, u)) {
                Cut k;
                k.u = u;
                int a = l.cycle.front();
                k.h = l.prefix;
                k.h.push_back(a);
                k.c.assign(l.cycle.begin() + 1, l.cycle.end());
                k.c.push_back(a);
                Q sum = 0;
                std::size_t m = l.cycle.size();
                for (std::size_t j = 0; j < m; ++j)
                    sum += g_.edges[g_.edge(l.cycle[j], l.cycle[(j + 1) % m])].reward[i_];
                k.label = sum / Q((long)m);
                std::vector<int> hc = k.h;
                hc.insert(hc.end(), k.c.begin(), k.c.end());
                Q run = 0;
                for (std::size_t j = 0; j < hc.size(); ++j) {
                    if (j > 0)
                        run += g_.edges[g_.edge(hc[j - 1], hc[j])].reward[i_];
                    if (g_.owner[hc[j]] != i_)
                        continue;
                    for (int e : g_.out[hc[j]])
                        k.pre.push_back(PreEdge{g_.edges[e].to, run + g_.edges[e].reward[i_], (int)j + 1});
                }
                std::sort(k.pre.begin(), k.pre.end());
                k.pre.erase(std::unique(k.pre.begin(), k.pre.end()), k.pre.end());

                Bits base = 0;
                for (int v : hc)
                    base |= Bits(1) << v;
                std::map<Bits, Cand> found;
                for (int s : g_.succ(a))
                    for (const Tail& t : tails[s]) {
                        if (found.count(t.W))
                            continue;
                        Bits occ = base | t.W;
                        std::vector<ExtRat> L(g_.p(), ExtRat::neg_inf());
                        for (int v : bits_list(occ))
                            if (g_.controlled(v))
                                L[g_.owner[v]] = max(L[g_.owner[v]], lambda_[v]);
                        if (std::any_of(L.begin(), L.end(), [](const ExtRat& x) { return x.is_pos_inf(); }))
                            continue;
                        auto key = std::make_tuple(t.K, L);
                        auto it = lp_cache.find(key);
                        if (it == lp_cache.end())
                            it = lp_cache.emplace(key, floor_flow(g_, t.K, L, i_)).first;
                        if (!it->second)
                            continue;
                        Cand c{u, (int)cuts_.size(), t.W, *it->second, {}};
                        std::set<int> post;
                        for (int v : bits_list(t.W))
                            if (g_.owner[v] == i_)
                                for (int w : g_.succ(v))
                                    post.insert(w);
                        c.post.assign(post.begin(), post.end());
                        found.emplace(t.W, std::move(c));
                    }
                if (found.empty())
                    continue;
                // drop proposals beaten on both the accepted payoff and the deviations they allow
                std::vector<Cand> list;
                for (auto& [w, c] : found)
                    list.push_back(std::move(c));
                std::sort(list.begin(), list.end(), [](const Cand& p, const Cand& q) {
                    return bits_list(p.W) < bits_list(q.W);
                });
                std::vector<char> dead(list.size(), 0);
                for (std::size_t p = 0; p < list.size(); ++p)
                    for (std::size_t q = 0; q < list.size() && !dead[p]; ++q) {
                        if (p == q || dead[q])
                            continue;
                        const Cand &A = list[q], &B = list[p];
                        bool sub = std::includes(B.post.begin(), B.post.end(), A.post.begin(), A.post.end());
                        if (!sub || A.x[i_] > B.x[i_])
                            continue;
                        bool equal = A.x[i_] == B.x[i_] && A.post == B.post;
                        if (!equal || q < p)
                            dead[p] = 1;
                    }
                cuts_.push_back(std::move(k));
                for (std::size_t p = 0; p < list.size(); ++p)
                    if (!dead[p]) {
                        by_vertex_[u].push_back((int)cands_.size());
                        cands_.push_back(std::move(list[p]));
                    }
            }
        }
    }

    // Challenger's best ratio cycle reachable from each Prover node, when Prover
    // plays `pick` (a cut per node) inside the subgame
    std::vector<Q> response(const std::vector<int>& pick, const Mask& in) const
    {
        Adj adj(n_);
        for (int u = 0; u < n_; ++u)
            if (pick[u] >= 0)
                for (const auto& e : cuts_[pick[u]].pre)
                    if (in[e.to])
                        adj[u].push_back(e.to);
        int k = 0;
        auto comp = scc(adj, in, k);
        std::vector<std::optional<Q>> best(k);
        for (const auto& part : nontrivial_sccs(adj, in)) {
            Mask here(n_, 0);
            for (int v : part)
                here[v] = 1;
            std::vector<WEdge> es;
            int extra = n_;
            for (int u : part)
                for (const auto& e : cuts_[pick[u]].pre) {
                    if (!here[e.to])
                        continue;
                    int prev = u;
                    for (int s = 1; s < e.len; ++s) {
                        es.push_back({prev, extra, s == 1 ? e.w : Q(0)});
                        prev = extra++;
                    }
                    es.push_back({prev, e.to, e.len == 1 ? e.w : Q(0)});
                }
            auto r = max_mean_cycle(extra, es);
            best[comp[part[0]]] = r->value;
        }
        std::vector<std::vector<int>> members(k);
        for (int v = 0; v < n_; ++v)
            if (comp[v] >= 0)
                members[comp[v]].push_back(v);
        for (int c = 0; c < k; ++c)
            for (int v : members[c])
                for (int w : adj[v]) {
                    int d = comp[w];
                    if (d != c && best[d] && (!best[c] || *best[d] > *best[c]))
                        best[c] = best[d];
                }
        std::vector<Q> val(n_, Q(0));
        for (int v = 0; v < n_; ++v)
            if (in[v])
                val[v] = *best[comp[v]];
        return val;
    }

    // mean-payoff subgame without acceptations or post-cycle deviations
    const BaseResult& base(const std::vector<int>& provers, const std::vector<int>& cands)
    {
        std::vector<char> key(n_ + cands_.size(), 0);
        for (int u : provers)
            key[u] = 1;
        for (int c : cands)
            key[n_ + c] = 1;
        auto it = base_cache_.find(key);
        if (it != base_cache_.end())
            return it->second;

        Mask in(n_, 0);
        for (int u : provers)
            in[u] = 1;
        // options per Prover node: distinct deviation sets, minimal under inclusion
        std::vector<std::vector<std::pair<int, int>>> opts(n_);  // (cut, candidate)
        for (int u : provers) {
            std::vector<std::tuple<std::vector<PreEdge>, int, int>> seen;
            for (int c : cands) {
                if (cands_[c].u != u)
                    continue;
                std::vector<PreEdge> pre;
                for (const auto& e : cuts_[cands_[c].cut].pre)
                    if (in[e.to])
                        pre.push_back(e);
                if (std::any_of(seen.begin(), seen.end(), [&](auto& s) { return std::get<0>(s) == pre; }))
                    continue;
                seen.push_back({pre, cands_[c].cut, c});
            }
            for (std::size_t p = 0; p < seen.size(); ++p) {
                bool dominated = false;
                for (std::size_t q = 0; q < seen.size() && !dominated; ++q)
                    if (p != q) {
                        const auto &A = std::get<0>(seen[q]), &B = std::get<0>(seen[p]);
                        dominated = A.size() < B.size() && std::includes(B.begin(), B.end(), A.begin(), A.end());
                    }
                if (!dominated)
                    opts[u].push_back({std::get<1>(seen[p]), std::get<2>(seen[p])});
            }
        }
        double combos = 1;
        for (int u : provers)
            combos *= (double)std::max<std::size_t>(1, opts[u].size());
        if (combos > 2e6)
            throw GameError("negotiation subgame too large to solve exactly");

        std::vector<int> pick(n_, -1), idx(n_, 0);
        std::optional<std::vector<Q>> val;
        std::vector<std::vector<int>> tried;
        std::function<void(std::size_t, const std::function<bool(const std::vector<Q>&)>&)> rec;
        bool stop = false;
        rec = [&](std::size_t k, const std::function<bool(const std::vector<Q>&)>& visit) {
            if (stop)
                return;
            if (k == provers.size()) {
                stop = visit(response(pick, in));
                return;
            }
            int u = provers[k];
            for (std::size_t o = 0; o < opts[u].size() && !stop; ++o) {
                pick[u] = opts[u][o].first;
                idx[u] = (int)o;
                rec(k + 1, visit);
            }
        };
        rec(0, [&](const std::vector<Q>& y) {
            if (!val)
                val = y;
            else
                for (int u : provers)
                    if (y[u] < (*val)[u])
                        (*val)[u] = y[u];
            return false;
        });
        BaseResult res;
        res.val = *val;
        res.choice.assign(n_, -1);
        stop = false;
        rec(0, [&](const std::vector<Q>& y) {
            for (int u : provers)
                if (y[u] != (*val)[u])
                    return false;
            for (int u : provers)
                res.choice[u] = opts[u][idx[u]].second;
            return true;
        });
        if (!stop)
            throw GameError("internal: no uniform optimal Prover strategy");
        for (int u : provers)
            recorded_.insert(res.val[u]);
        return base_cache_.emplace(std::move(key), std::move(res)).first->second;
    }

    const Decision& decide(const Q& t)
    {
        auto it = decisions_.find(t);
        if (it != decisions_.end())
            return it->second;
        // layout: Prover nodes, candidates, top, bottom, low[n], high[n]
        std::vector<int> live;
        for (int c = 0; c < (int)cands_.size(); ++c)
            if (cands_[c].x[i_] <= t)
                live.push_back(c);
        int C = (int)live.size();
        int top = n_ + C, bot = top + 1, low0 = bot + 1, high0 = low0 + n_;
        int N = high0 + n_;
        Adj succ(N);
        Mask prover(N, 0);
        std::vector<int> prio(N, 2), gid(N, -1);
        std::vector<int> node_of(cands_.size(), -1);
        for (int k = 0; k < C; ++k) {
            gid[n_ + k] = live[k];
            node_of[live[k]] = n_ + k;
        }
        for (int u = 0; u < n_; ++u) {
            prover[u] = 1;
            for (int c : by_vertex_[u])
                if (node_of[c] >= 0)
                    succ[u].push_back(node_of[c]);
            if (succ[u].empty())
                succ[u].push_back(bot);
            succ[low0 + u] = {u};
            succ[high0 + u] = {u};
            prio[low0 + u] = 0;
            prio[high0 + u] = 1;
        }
        for (int k = 0; k < C; ++k) {
            const Cand& c = cands_[live[k]];
            const Cut& cut = cuts_[c.cut];
            auto& s = succ[n_ + k];
            s.push_back(top);
            for (const auto& e : cut.pre)
                s.push_back(e.to);
            for (int w : c.post)
                s.push_back(cut.label <= t ? low0 + w : high0 + w);
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        succ[top] = {top};
        succ[bot] = {bot};
        prio[top] = 0;
        prio[bot] = 1;

        Mask other(N, 0);
        for (int v = 0; v < N; ++v)
            other[v] = !prover[v];
        std::vector<int> strat(N, -1), scratch(N, -1);
        auto minus = [](const Mask& a, const Mask& b) {
            Mask r(a.size(), 0);
            for (std::size_t v = 0; v < a.size(); ++v)
                r[v] = a[v] && !b[v];
            return r;
        };
        std::function<Mask(const Mask&)> solve = [&](const Mask& S) -> Mask {
            Mask none(N, 0);
            int d = 3;
            for (int v = 0; v < N; ++v)
                if (S[v])
                    d = std::min(d, prio[v]);
            if (d == 3)
                return none;
            if (d == 2) {
                std::vector<int> ps, cs;
                for (int v = 0; v < n_; ++v)
                    if (S[v])
                        ps.push_back(v);
                for (int k = 0; k < C; ++k)
                    if (S[n_ + k])
                        cs.push_back(live[k]);
                const BaseResult& b = base(ps, cs);
                Mask w(N, 0);
                for (int u : ps)
                    if (b.val[u] <= t) {
                        w[u] = 1;
                        strat[u] = node_of[b.choice[u]];
                    }
                for (int k = 0; k < C; ++k) {
                    if (!S[n_ + k])
                        continue;
                    bool ok = true;
                    for (int v : succ[n_ + k])
                        if (S[v] && !w[v])
                            ok = false;
                    w[n_ + k] = ok;
                }
                return w;
            }
            Mask top_set(N, 0);
            for (int v = 0; v < N; ++v)
                top_set[v] = S[v] && prio[v] == d;
            if (d == 0) {
                Mask A = attractor(succ, prover, top_set, S, strat);
                Mask sub = minus(S, A);
                Mask Wp = solve(sub);
                Mask Wc = minus(sub, Wp);
                if (count(Wc) == 0)
                    return S;
                Mask B = attractor(succ, other, Wc, S, scratch);
                return solve(minus(S, B));
            }
            Mask A = attractor(succ, other, top_set, S, scratch);
            Mask Wp = solve(minus(S, A));
            if (count(Wp) == 0)
                return none;
            Mask B = attractor(succ, prover, Wp, S, strat);
            Mask rest = solve(minus(S, B));
            for (int v = 0; v < N; ++v)
                rest[v] |= B[v];
            return rest;
        };
        Mask W = solve(full_mask(N));
        Decision dec;
        dec.win.assign(n_, 0);
        dec.choice.assign(n_, -1);
        for (int u = 0; u < n_; ++u) {
            dec.win[u] = W[u];
            if (W[u] && strat[u] >= n_ && strat[u] < n_ + C)
                dec.choice[u] = gid[strat[u]];
        }
        return decisions_.emplace(t, std::move(dec)).first->second;
    }
};

}

MpNego nego_mp_full(const Game& g, const Requirement& lambda, bool with_strategies)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("nego_mp needs a mean-payoff game");
    for (int v = 0; v < g.n(); ++v)
        if (!g.controlled(v))
            throw GameError("nego_mp needs a game without chance vertices");
    MpNego res;
    res.value.assign(g.n(), ExtRat::neg_inf());
    auto tails = all_tails(g);
    for (int i = 0; i < g.p(); ++i) {
        std::vector<int> mine;
        for (int v = 0; v < g.n(); ++v)
            if (g.owner[v] == i)
                mine.push_back(v);
        if (mine.empty())
            continue;
        MpSolver solver(g, lambda, i, tails);
        for (int v : mine) {
            std::vector<int> choice;
            res.value[v] = solver.value(v, with_strategies ? &choice : nullptr);
            if (with_strategies && res.value[v].finite()) {
                ReducedStrategy tau;
                for (int w = 0; w < g.n(); ++w)
                    if (choice[w] >= 0)
                        tau[w] = solver.family(choice[w]);
                res.strategy[v] = std::move(tau);
            }
        }
    }
    return res;
}

Requirement nego_mp(const Game& g, const Requirement& lambda) { return nego_mp_full(g, lambda, false).value; }

Requirement nego(const Game& g, const Requirement& lambda)
{
    switch (g.mode) {
    case Mode::parity:
        return nego_parity(g, lambda);
    case Mode::mean_payoff:
        return nego_mp(g, lambda);
    default:
        throw GameError(std::string("negotiation function not available in mode ") + mode_name(g.mode));
    }
}

static Requirement shift_down(Requirement r, const Q& eps)
{
    if (eps == 0)
        return r;
    for (auto& x : r)
        if (x.finite())
            x = ExtRat(x.value() - eps);
    return r;
}

NegoSequence nego_iterate(const Game& g, int max_iters, const Q& eps)
{
    NegoSequence s;
    s.iterates.push_back(vacuous_requirement(g));
    for (int k = 0; k < max_iters; ++k) {
        Requirement next = shift_down(nego(g, s.iterates.back()), eps);
        if (next == s.iterates.back()) {
            s.converged = true;
            break;
        }
        s.iterates.push_back(std::move(next));
    }
    return s;
}

bool is_eps_fixed_point(const Game& g, const Requirement& lambda, const Q& eps)
{
    Requirement n = nego(g, lambda);
    for (int v = 0; v < g.n(); ++v) {
        if (!g.controlled(v) || lambda[v].is_pos_inf())
            continue;
        ExtRat bound = lambda[v].finite() ? ExtRat(lambda[v].value() + eps) : lambda[v];
        if (n[v] > bound)
            return false;
    }
    return true;
}

}
