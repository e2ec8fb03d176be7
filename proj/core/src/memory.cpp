#include "equilibra/memory.hpp"

#include <algorithm>
#include <map>

namespace eq {

bool Memory::speaks_for(int player) const
{
    return std::find(owners.begin(), owners.end(), player) != owners.end();
}

bool Memory::deterministic() const
{
    std::map<std::pair<int, int>, int> cnt;
    for (const auto& t : trans)
        if (++cnt[{t.from, t.reads}] > 1)
            return false;
    return true;
}

std::vector<std::pair<const MemTransition*, Q>> Memory::enabled(const Game& g, int q, int v) const
{
    std::vector<std::pair<const MemTransition*, Q>> r;
    for (const auto& t : trans)
        if (t.from == q && t.reads == v)
            r.push_back({&t, Q(0)});
    if (r.empty())
        return r;
    bool weighted = controls(g, v) && std::any_of(r.begin(), r.end(), [](auto& x) { return x.first->has_weight; });
    for (auto& [t, w] : r)
        w = weighted ? t->weight : Q(1, (unsigned long)r.size());
    return r;
}

void Memory::validate(const Game& g) const
{
    if (states.empty())
        throw GameError("memory structure without states");
    if (initial < 0 || initial >= size())
        throw GameError("memory: bad initial state");
    for (int o : owners)
        if (o < 0 || o >= g.p())
            throw GameError("memory: bad owner");
    std::map<std::pair<int, int>, Q> wsum;
    std::map<std::pair<int, int>, int> cnt, nweighted;
    for (const auto& t : trans) {
        if (t.from < 0 || t.from >= size() || t.to < 0 || t.to >= size())
            throw GameError("memory: transition references unknown state");
        if (t.reads < 0 || t.reads >= g.n())
            throw GameError("memory: transition reads unknown vertex");
        const std::string where = "memory transition " + states[t.from] + "/" + g.names[t.reads];
        if (controls(g, t.reads)) {
            if (t.emit < 0)
                throw GameError(where + ": controlled read without emit");
            if (!g.has_edge(t.reads, t.emit))
                throw GameError(where + ": emit is not a successor");
        } else if (t.emit >= 0) {
            throw GameError(where + ": emit on a non-controlled read");
        }
        ++cnt[{t.from, t.reads}];
        if (t.has_weight) {
            if (t.weight <= 0 || t.weight > 1)
                throw GameError(where + ": weight outside (0,1]");
            wsum[{t.from, t.reads}] += t.weight;
            ++nweighted[{t.from, t.reads}];
        }
    }
    for (int q = 0; q < size(); ++q)
        for (int v = 0; v < g.n(); ++v) {
            if (g.owner[v] == TERMINAL)
                continue;
            if (!cnt.count({q, v}))
                throw GameError("memory: no transition for state " + states[q] + " reading " + g.names[v]);
        }
    for (auto& [k, c] : nweighted) {
        if (c != cnt[k])
            throw GameError("memory: weights given on only some co-enabled transitions");
        if (wsum[k] != 1)
            throw GameError("memory: weights at " + states[k.first] + "/" + g.names[k.second] + " do not sum to 1");
    }
}

Memory vacuous_memory(const Game& g, std::vector<int> owners)
{
    Memory m;
    m.states = {"q0"};
    m.owners = std::move(owners);
    for (int v = 0; v < g.n(); ++v) {
        if (g.owner[v] == TERMINAL)
            continue;
        if (m.controls(g, v)) {
            for (int w : g.succ(v))
                m.trans.push_back(MemTransition{0, v, 0, w, Q(0), false});
        } else {
            m.trans.push_back(MemTransition{0, v, 0, -1, Q(0), false});
        }
    }
    return m;
}

}
