#pragma once

#include "equilibra/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eq {

enum class Mode { parity, mean_payoff, energy, discounted, terminal };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

inline constexpr int CHANCE = -1;
inline constexpr int TERMINAL = -2;

struct GameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    int from = 0;
    int to = 0;
    Q prob;                 // chance edges only
    std::vector<Q> reward;  // per player, weighted modes only
};

struct Game {
    std::vector<std::string> players;
    Mode mode = Mode::parity;
    int init = -1;
    std::vector<std::string> names;
    std::vector<int> owner;  // player index, CHANCE or TERMINAL
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out;     // edge indices by source
    std::vector<std::vector<int>> color;   // [v][i], parity
    std::vector<std::vector<Q>> payoff;    // [v][i], terminals
    Q discount;

    int n() const { return (int)names.size(); }
    int p() const { return (int)players.size(); }
    int vertex(const std::string& name) const;
    int player(const std::string& name) const;
    int edge(int u, int v) const;  // -1 if absent
    bool has_edge(int u, int v) const { return edge(u, v) >= 0; }
    std::vector<int> succ(int v) const;
    bool weighted() const
    {
        return mode == Mode::mean_payoff || mode == Mode::energy || mode == Mode::discounted;
    }
    bool controlled(int v) const { return owner[v] >= 0; }

    int add_vertex(const std::string& name, int own);
    int add_edge(int u, int v);
    void rebuild_out();
    void validate() const;
};

// h c^omega; an empty cycle means h ends in a terminal
struct Lasso {
    std::vector<int> prefix;
    std::vector<int> cycle;

    bool operator==(const Lasso&) const = default;
    auto operator<=>(const Lasso&) const = default;
};

void check_lasso(const Game& g, const Lasso& l);
Lasso canonical(Lasso l);
std::vector<int> least_rotation(const std::vector<int>& c);
int lasso_first(const Lasso& l);
std::string lasso_str(const Game& g, const Lasso& l);
Lasso parse_lasso(const Game& g, const std::string& s);
std::string cycle_id(const Game& g, const std::vector<int>& c);

ExtRat eval_lasso(const Game& g, const Lasso& l, int player);
std::vector<ExtRat> eval_lasso(const Game& g, const Lasso& l);

// suffix of the play starting at position k, as a lasso
Lasso lasso_suffix(const Lasso& l, std::size_t k);

// all lassos from v with |h| <= hmax, |c| <= cmax, in canonical form and without repeats
std::vector<Lasso> enumerate_lassos(const Game& g, int v, int hmax, int cmax);
std::vector<Lasso> simple_lassos(const Game& g, int v);

}
