#include "equilibra/game.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace eq {

const char* mode_name(Mode m)
{
    switch (m) {
    case Mode::parity: return "parity";
    case Mode::mean_payoff: return "mean-payoff";
    case Mode::energy: return "energy";
    case Mode::discounted: return "discounted-sum";
    case Mode::terminal: return "terminal";
    }
    return "?";
}

Mode parse_mode(const std::string& s)
{
    if (s == "parity") return Mode::parity;
    if (s == "mean-payoff") return Mode::mean_payoff;
    if (s == "energy") return Mode::energy;
    if (s == "discounted-sum") return Mode::discounted;
    if (s == "terminal") return Mode::terminal;
    throw GameError("unknown mode '" + s + "'");
}

int Game::vertex(const std::string& name) const
{
    for (int v = 0; v < n(); ++v)
        if (names[v] == name)
            return v;
    throw GameError("unknown vertex '" + name + "'");
}

int Game::player(const std::string& name) const
{
    for (int i = 0; i < p(); ++i)
        if (players[i] == name)
            return i;
    throw GameError("unknown player '" + name + "'");
}

int Game::edge(int u, int v) const
{
    for (int e : out[u])
        if (edges[e].to == v)
            return e;
    return -1;
}

std::vector<int> Game::succ(int v) const
{
    std::vector<int> s;
    s.reserve(out[v].size());
    for (int e : out[v])
        s.push_back(edges[e].to);
    return s;
}

int Game::add_vertex(const std::string& name, int own)
{
    names.push_back(name);
    owner.push_back(own);
    out.emplace_back();
    if (mode == Mode::parity)
        color.emplace_back(p(), 0);
    payoff.emplace_back();
    return n() - 1;
}

int Game::add_edge(int u, int v)
{
    Edge e;
    e.from = u;
    e.to = v;
    if (weighted())
        e.reward.assign(p(), Q(0));
    edges.push_back(e);
    out[u].push_back((int)edges.size() - 1);
    return (int)edges.size() - 1;
}

void Game::rebuild_out()
{
    out.assign(n(), {});
    for (int e = 0; e < (int)edges.size(); ++e)
        out[edges[e].from].push_back(e);
}

void Game::validate() const
{
    if (players.empty())
        throw GameError("no players");
    for (int i = 0; i < p(); ++i)
        for (int j = 0; j < i; ++j)
            if (players[i] == players[j])
                throw GameError("duplicate player '" + players[i] + "'");
    if (n() == 0)
        throw GameError("no vertices");
    if ((int)owner.size() != n() || (int)out.size() != n())
        throw GameError("inconsistent vertex tables");
    for (int v = 0; v < n(); ++v) {
        const auto& nm = names[v];
        if (nm.empty() || nm.find_first_of(".()") != std::string::npos)
            throw GameError("vertex name '" + nm + "' is empty or contains . ( )");
        for (int w = 0; w < v; ++w)
            if (names[w] == nm)
                throw GameError("duplicate vertex '" + nm + "'");
        if (owner[v] >= p() || owner[v] < TERMINAL)
            throw GameError("vertex '" + nm + "': bad owner");
    }
    if (init < -1 || init >= n())
        throw GameError("bad init");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= n() || e.to < 0 || e.to >= n())
            throw GameError("dangling edge");
        if (!seen.insert({e.from, e.to}).second)
            throw GameError("duplicate edge " + names[e.from] + "->" + names[e.to]);
        if (weighted() && (int)e.reward.size() != p())
            throw GameError("edge " + names[e.from] + "->" + names[e.to] + ": reward vector size");
    }
    if (mode == Mode::parity) {
        if ((int)color.size() != n())
            throw GameError("color table size");
        for (int v = 0; v < n(); ++v)
            if ((int)color[v].size() != p())
                throw GameError("vertex '" + names[v] + "': missing colors");
    }
    if (mode == Mode::discounted && (discount <= 0 || discount >= 1))
        throw GameError("discount must lie strictly inside (0,1)");

    std::vector<int> indeg(n(), 0);
    for (const auto& e : edges)
        ++indeg[e.to];
    for (int v = 0; v < n(); ++v) {
        const auto& nm = names[v];
        if (mode == Mode::terminal) {
            if (owner[v] == TERMINAL) {
                if (!out[v].empty())
                    throw GameError("terminal '" + nm + "' has outgoing edges");
                if ((int)payoff[v].size() != p())
                    throw GameError("terminal '" + nm + "': missing payoffs");
            } else if (out[v].empty()) {
                throw GameError("vertex '" + nm + "' has no outgoing edge");
            }
        } else {
            if (owner[v] == TERMINAL)
                throw GameError("terminal vertex '" + nm + "' outside terminal mode");
            if (out[v].empty())
                throw GameError("vertex '" + nm + "' has no outgoing edge");
        }
        if (owner[v] == CHANCE) {
            Q s = 0;
            for (int e : out[v]) {
                const Q& pr = edges[e].prob;
                if (pr <= 0 || pr > 1)
                    throw GameError("chance edge from '" + nm + "': probability outside (0,1]");
                s += pr;
            }
            if (s != 1)
                throw GameError("chance vertex '" + nm + "': probability sum != 1");
        }
        if (indeg[v] == 0 && v != init)
            throw GameError("vertex '" + nm + "' has no ingoing edge");
    }
}

void check_lasso(const Game& g, const Lasso& l)
{
    std::vector<int> seq = l.prefix;
    seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
    if (seq.empty())
        throw GameError("empty lasso");
    for (int v : seq)
        if (v < 0 || v >= g.n())
            throw GameError("lasso vertex out of range");
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
        if (!g.has_edge(seq[k], seq[k + 1]))
            throw GameError("lasso uses missing edge " + g.names[seq[k]] + "->" + g.names[seq[k + 1]]);
    if (l.cycle.empty()) {
        if (g.owner[seq.back()] != TERMINAL)
            throw GameError("finite lasso must end in a terminal");
    } else if (!g.has_edge(l.cycle.back(), l.cycle.front())) {
        throw GameError("cycle does not close");
    }
}

std::vector<int> least_rotation(const std::vector<int>& c)
{
    std::vector<int> best = c;
    std::vector<int> r = c;
    for (std::size_t k = 1; k < c.size(); ++k) {
        std::rotate(r.begin(), r.begin() + 1, r.end());
        if (r < best)
            best = r;
    }
    return best;
}

// Minimal prefix with a primitive cycle: unique for a given play.
Lasso canonical(Lasso l)
{
    auto& c = l.cycle;
    if (c.empty())
        return l;
    std::size_t k = c.size();
    for (std::size_t d = 1; d < k; ++d) {
        if (k % d)
            continue;
        bool per = true;
        for (std::size_t j = d; j < k && per; ++j)
            per = c[j] == c[j - d];
        if (per) {
            c.resize(d);
            break;
        }
    }
    while (!l.prefix.empty() && l.prefix.back() == c.back()) {
        std::rotate(c.begin(), c.end() - 1, c.end());
        l.prefix.pop_back();
    }
    return l;
}

int lasso_first(const Lasso& l) { return l.prefix.empty() ? l.cycle.front() : l.prefix.front(); }

static std::string join(const Game& g, const std::vector<int>& s)
{
    std::string r;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k)
            r += '.';
        r += g.names[s[k]];
    }
    return r;
}

std::string lasso_str(const Game& g, const Lasso& l)
{
    return join(g, l.prefix) + "(" + join(g, l.cycle) + ")";
}

std::string cycle_id(const Game& g, const std::vector<int>& c) { return join(g, least_rotation(c)); }

Lasso parse_lasso(const Game& g, const std::string& s)
{
    auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw GameError("lasso '" + s + "': expected h0.h1(c0.c1)");
    auto split = [&](const std::string& part) {
        std::vector<int> r;
        std::size_t b = 0;
        while (b < part.size()) {
            auto e = part.find('.', b);
            if (e == std::string::npos)
                e = part.size();
            r.push_back(g.vertex(part.substr(b, e - b)));
            b = e + 1;
        }
        return r;
    };
    Lasso l{split(s.substr(0, open)), split(s.substr(open + 1, s.size() - open - 2))};
    check_lasso(g, l);
    return l;
}

Lasso lasso_suffix(const Lasso& l, std::size_t k)
{
    if (k < l.prefix.size())
        return Lasso{std::vector<int>(l.prefix.begin() + k, l.prefix.end()), l.cycle};
    std::size_t j = (k - l.prefix.size()) % std::max<std::size_t>(1, l.cycle.size());
    Lasso r;
    r.cycle.assign(l.cycle.begin() + j, l.cycle.end());
    r.cycle.insert(r.cycle.end(), l.cycle.begin(), l.cycle.begin() + j);
    return r;
}

static const Q& rew(const Game& g, int u, int v, int i)
{
    int e = g.edge(u, v);
    return g.edges[e].reward[i];
}

ExtRat eval_lasso(const Game& g, const Lasso& l, int i)
{
    const auto& h = l.prefix;
    const auto& c = l.cycle;
    if (c.empty()) {
        if (g.mode != Mode::terminal)
            throw GameError("finite lasso in an infinite-play mode");
        return ExtRat(g.payoff[h.back()][i]);
    }
    std::size_t m = c.size();
    auto cyc_edge = [&](std::size_t j) { return std::pair(c[j], c[(j + 1) % m]); };
    switch (g.mode) {
    case Mode::terminal:
        return ExtRat(0);
    case Mode::parity: {
        int mn = g.color[c[0]][i];
        for (int v : c)
            mn = std::min(mn, g.color[v][i]);
        return ExtRat(mn % 2 == 0 ? 1 : 0);
    }
    case Mode::mean_payoff: {
        // On h c^omega every long prefix is dominated by whole passes of c,
        // so the liminf of the running means is the mean of c.
        Q s = 0;
        for (std::size_t j = 0; j < m; ++j) {
            auto [u, v] = cyc_edge(j);
            s += rew(g, u, v, i);
        }
        return ExtRat(Q(s / Q((long)m)));
    }
    case Mode::discounted: {
        Q total = 0, pw = 1;
        std::vector<int> seq = h;
        seq.push_back(c[0]);
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
            total += pw * rew(g, seq[k], seq[k + 1], i);
            pw *= g.discount;
        }
        Q cs = 0, cp = 1;
        for (std::size_t j = 0; j < m; ++j) {
            auto [u, v] = cyc_edge(j);
            cs += cp * rew(g, u, v, i);
            cp *= g.discount;
        }
        total += pw * cs / (1 - cp);
        return ExtRat(total);
    }
    case Mode::energy: {
        Q el = 0;
        std::vector<int> seq = h;
        seq.insert(seq.end(), c.begin(), c.end());
        seq.push_back(c[0]);
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
            el += rew(g, seq[k], seq[k + 1], i);
            if (el < 0)
                return ExtRat(0);
        }
        Q drift = 0;
        for (std::size_t j = 0; j < m; ++j) {
            auto [u, v] = cyc_edge(j);
            drift += rew(g, u, v, i);
        }
        return ExtRat(drift >= 0 ? 1 : 0);
    }
    }
    return ExtRat(0);
}

std::vector<ExtRat> eval_lasso(const Game& g, const Lasso& l)
{
    std::vector<ExtRat> r;
    for (int i = 0; i < g.p(); ++i)
        r.push_back(eval_lasso(g, l, i));
    return r;
}

std::vector<Lasso> enumerate_lassos(const Game& g, int v, int hmax, int cmax)
{
    std::set<Lasso> found;
    std::vector<int> walk{v};
    std::function<void()> rec = [&]() {
        int last = walk.back();
        int len = (int)walk.size();
        if (g.owner[last] == TERMINAL && len - 1 <= hmax)
            found.insert(Lasso{walk, {}});
        for (int j = std::max(0, len - cmax); j < len; ++j) {
            if (j > hmax)
                break;
            if (g.has_edge(last, walk[j]))
                found.insert(canonical(Lasso{std::vector<int>(walk.begin(), walk.begin() + j),
                                             std::vector<int>(walk.begin() + j, walk.end())}));
        }
        if (len >= hmax + cmax)
            return;
        for (int w : g.succ(last)) {
            walk.push_back(w);
            rec();
            walk.pop_back();
        }
    };
    rec();
    return {found.begin(), found.end()};
}

std::vector<Lasso> simple_lassos(const Game& g, int v)
{
    std::vector<Lasso> res;
    std::vector<int> walk{v};
    std::vector<char> on(g.n(), 0);
    on[v] = 1;
    std::function<void()> rec = [&]() {
        int last = walk.back();
        if (g.owner[last] == TERMINAL)
            res.push_back(Lasso{walk, {}});
        for (int w : g.succ(last)) {
            if (on[w]) {
                auto it = std::find(walk.begin(), walk.end(), w);
                res.push_back(Lasso{std::vector<int>(walk.begin(), it), std::vector<int>(it, walk.end())});
                continue;
            }
            on[w] = 1;
            walk.push_back(w);
            rec();
            walk.pop_back();
            on[w] = 0;
        }
    };
    rec();
    std::sort(res.begin(), res.end());
    return res;
}

}
