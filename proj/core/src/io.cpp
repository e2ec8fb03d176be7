#include "equilibra/io.hpp"

#include <fstream>
#include <sstream>

namespace eq {

static Q rat(const json& j, const std::string& where)
{
    try {
        if (j.is_string())
            return parse_q(j.get<std::string>());
        if (j.is_number_integer())
            return Q(j.get<long>());
    } catch (const std::exception& e) {
        throw GameError(where + ": " + e.what());
    }
    throw GameError(where + ": expected a \"p/q\" string");
}

static const json& need(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw GameError(where + ": missing key '" + key + "'");
    return j.at(key);
}

static std::string str(const json& j, const std::string& where)
{
    if (!j.is_string())
        throw GameError(where + ": expected a string");
    return j.get<std::string>();
}

Game game_from_json(const json& j)
{
    if (!j.is_object())
        throw GameError("game: top level must be an object");
    Game g;
    for (const auto& p : need(j, "players", "game"))
        g.players.push_back(str(p, "players"));
    g.mode = parse_mode(str(need(j, "mode", "game"), "mode"));
    for (const auto& v : need(j, "vertices", "game")) {
        std::string id = str(need(v, "id", "vertices"), "vertices.id");
        std::string ow = str(need(v, "owner", "vertex " + id), "vertex " + id);
        int own;
        if (ow == "chance")
            own = CHANCE;
        else if (ow == "terminal")
            own = TERMINAL;
        else
            own = g.player(ow);
        g.names.push_back(id);
        g.owner.push_back(own);
    }
    g.out.assign(g.n(), {});
    g.payoff.assign(g.n(), {});
    auto vtx = [&](const json& x, const std::string& where) {
        std::string s = str(x, where);
        try {
            return g.vertex(s);
        } catch (const GameError&) {
            throw GameError(where + ": dangling vertex reference '" + s + "'");
        }
    };
    if (j.contains("init") && !j["init"].is_null())
        g.init = vtx(j["init"], "init");
    for (const auto& e : need(j, "edges", "game")) {
        Edge ed;
        ed.from = vtx(need(e, "from", "edge"), "edge.from");
        ed.to = vtx(need(e, "to", "edge"), "edge.to");
        std::string where = "edge " + g.names[ed.from] + "->" + g.names[ed.to];
        if (e.contains("prob")) {
            if (g.owner[ed.from] != CHANCE)
                throw GameError(where + ": prob on a non-chance edge");
            ed.prob = rat(e["prob"], where);
        } else if (g.owner[ed.from] == CHANCE) {
            throw GameError(where + ": chance edge without prob");
        }
        if (g.weighted()) {
            ed.reward.assign(g.p(), Q(0));
            if (e.contains("rewards"))
                for (auto& [pl, r] : e["rewards"].items())
                    ed.reward[g.player(pl)] = rat(r, where);
        } else if (e.contains("rewards")) {
            throw GameError(where + ": rewards outside weighted modes");
        }
        g.edges.push_back(ed);
        g.out[ed.from].push_back((int)g.edges.size() - 1);
    }
    if (g.mode == Mode::parity) {
        g.color.assign(g.n(), std::vector<int>(g.p(), -1));
        for (auto& [v, cs] : need(j, "colors", "game").items()) {
            int x = g.vertex(v);
            for (auto& [pl, c] : cs.items()) {
                if (!c.is_number_integer() || c.get<long>() < 0)
                    throw GameError("colors of " + v + ": expected a natural number");
                g.color[x][g.player(pl)] = c.get<int>();
            }
        }
        for (int v = 0; v < g.n(); ++v)
            for (int i = 0; i < g.p(); ++i)
                if (g.color[v][i] < 0)
                    throw GameError("vertex '" + g.names[v] + "': no color for " + g.players[i]);
    }
    if (g.mode == Mode::discounted)
        g.discount = rat(need(j, "discount", "game"), "discount");
    if (g.mode == Mode::terminal) {
        for (auto& [v, ps] : need(j, "terminals", "game").items()) {
            int x = g.vertex(v);
            if (g.owner[x] != TERMINAL)
                throw GameError("terminals: '" + v + "' is not terminal-owned");
            g.payoff[x].assign(g.p(), Q(0));
            for (auto& [pl, r] : ps.items())
                g.payoff[x][g.player(pl)] = rat(r, "terminal " + v);
        }
    }
    for (const char* k : {"colors", "discount", "terminals"}) {
        bool want = (std::string(k) == "colors" && g.mode == Mode::parity) ||
                    (std::string(k) == "discount" && g.mode == Mode::discounted) ||
                    (std::string(k) == "terminals" && g.mode == Mode::terminal);
        if (j.contains(k) && !want)
            throw GameError(std::string("key '") + k + "' not allowed in mode " + mode_name(g.mode));
    }
    g.validate();
    return g;
}

json game_to_json(const Game& g)
{
    json j;
    j["players"] = g.players;
    j["mode"] = mode_name(g.mode);
    if (g.init >= 0)
        j["init"] = g.names[g.init];
    j["vertices"] = json::array();
    for (int v = 0; v < g.n(); ++v) {
        std::string ow = g.owner[v] == CHANCE ? "chance" : g.owner[v] == TERMINAL ? "terminal" : g.players[g.owner[v]];
        j["vertices"].push_back({{"id", g.names[v]}, {"owner", ow}});
    }
    j["edges"] = json::array();
    for (const auto& e : g.edges) {
        json je = {{"from", g.names[e.from]}, {"to", g.names[e.to]}};
        if (g.owner[e.from] == CHANCE)
            je["prob"] = q_str(e.prob);
        if (g.weighted()) {
            json r = json::object();
            for (int i = 0; i < g.p(); ++i)
                r[g.players[i]] = q_str(e.reward[i]);
            je["rewards"] = r;
        }
        j["edges"].push_back(je);
    }
    if (g.mode == Mode::parity) {
        json c = json::object();
        for (int v = 0; v < g.n(); ++v) {
            json cv = json::object();
            for (int i = 0; i < g.p(); ++i)
                cv[g.players[i]] = g.color[v][i];
            c[g.names[v]] = cv;
        }
        j["colors"] = c;
    }
    if (g.mode == Mode::discounted)
        j["discount"] = q_str(g.discount);
    if (g.mode == Mode::terminal) {
        json t = json::object();
        for (int v = 0; v < g.n(); ++v) {
            if (g.owner[v] != TERMINAL)
                continue;
            json tv = json::object();
            for (int i = 0; i < g.p(); ++i)
                tv[g.players[i]] = q_str(g.payoff[v][i]);
            t[g.names[v]] = tv;
        }
        j["terminals"] = t;
    }
    return j;
}

Game parse_game(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw GameError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return game_from_json(j);
    } catch (const json::exception& e) {
        throw GameError(std::string("schema violation: ") + e.what());
    }
}

std::string serialize_game(const Game& g) { return game_to_json(g).dump(2) + "\n"; }

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw GameError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Game load_game(const std::string& path) { return parse_game(read_file(path)); }

Memory memory_from_json(const Game& g, const json& j)
{
    Memory m;
    try {
        for (const auto& s : need(j, "states", "memory"))
            m.states.push_back(str(s, "memory.states"));
        auto state = [&](const json& x) {
            std::string s = str(x, "memory state");
            for (int q = 0; q < m.size(); ++q)
                if (m.states[q] == s)
                    return q;
            throw GameError("memory: unknown state '" + s + "'");
        };
        m.initial = state(need(j, "initial", "memory"));
        for (const auto& o : need(j, "owners", "memory"))
            m.owners.push_back(g.player(str(o, "memory.owners")));
        for (const auto& t : need(j, "transitions", "memory")) {
            MemTransition tr;
            tr.from = state(need(t, "from", "transition"));
            tr.reads = g.vertex(str(need(t, "reads", "transition"), "transition.reads"));
            tr.to = state(need(t, "to", "transition"));
            if (t.contains("emit"))
                tr.emit = g.vertex(str(t["emit"], "transition.emit"));
            if (t.contains("weight")) {
                tr.weight = rat(t["weight"], "transition.weight");
                tr.has_weight = true;
            }
            m.trans.push_back(tr);
        }
    } catch (const json::exception& e) {
        throw GameError(std::string("memory schema violation: ") + e.what());
    }
    m.validate(g);
    return m;
}

json memory_to_json(const Game& g, const Memory& m)
{
    json j;
    j["states"] = m.states;
    j["initial"] = m.states[m.initial];
    j["owners"] = json::array();
    for (int o : m.owners)
        j["owners"].push_back(g.players[o]);
    j["transitions"] = json::array();
    for (const auto& t : m.trans) {
        json jt = {{"from", m.states[t.from]}, {"reads", g.names[t.reads]}, {"to", m.states[t.to]}};
        if (t.emit >= 0)
            jt["emit"] = g.names[t.emit];
        if (t.has_weight)
            jt["weight"] = q_str(t.weight);
        j["transitions"].push_back(jt);
    }
    return j;
}

Memory load_memory(const Game& g, const std::string& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw GameError(std::string("malformed JSON: ") + e.what());
    }
    return memory_from_json(g, j);
}

json requirement_to_json(const Game& g, const Requirement& r)
{
    json j = json::object();
    for (int v = 0; v < g.n(); ++v)
        j[g.names[v]] = r[v].str();
    return j;
}

Requirement requirement_from_json(const Game& g, const json& j)
{
    Requirement r(g.n(), ExtRat::neg_inf());
    for (auto& [v, x] : j.items())
        r[g.vertex(v)] = ExtRat::parse(str(x, "requirement"));
    return r;
}

}
