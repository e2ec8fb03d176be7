#pragma once

#include "equilibra/game.hpp"
#include "equilibra/graph.hpp"

#include <optional>
#include <vector>

namespace eq {

// Least set containing `target` such that a `mine` vertex with one edge into
// the set, or another vertex with all (at least one) edges into it, is added.
// Only vertices of `within` are considered when it is non-empty.
Mask attractor(const Adj& succ, const Mask& mine, const Mask& target, const Mask& within = {});
Mask attractor(const Game& g, const std::vector<int>& coalition, const Mask& target);
// also records, for each attracted `mine` vertex, the successor it moves to
Mask attractor(const Adj& succ, const Mask& mine, const Mask& target, const Mask& within,
               std::vector<int>& strategy);

struct WEdge {
    int from, to;
    Q w;
};

struct MeanCycle {
    Q value;
    std::vector<int> cycle;
};

// minimum cycle mean among cycles reachable from `from` (all vertices if empty)
std::optional<MeanCycle> min_mean_cycle(int n, const std::vector<WEdge>& edges, const std::vector<int>& from = {});
std::optional<MeanCycle> max_mean_cycle(int n, const std::vector<WEdge>& edges, const std::vector<int>& from = {});
MeanCycle min_mean_cycle(const Game& g, int player);

struct ParityResult {
    Mask win;                  // protagonist wins (min color even)
    std::vector<int> strategy; // successor for protagonist vertices in win, and for opponent vertices outside win
};

ParityResult solve_parity(const Adj& succ, const Mask& mine, const std::vector<int>& color);
ParityResult parity_region(const Game& g, const std::vector<int>& coalition, int player);

// Disjunction of min-parity conditions: `mine` wins if in some dimension the
// least color seen infinitely often is even.
Mask solve_generalized_parity(const Adj& succ, const Mask& mine, const std::vector<std::vector<int>>& colors);

// mean-payoff adversarial value of `player` from every vertex
std::vector<Q> mp_values(const Game& g, int player);
// parity adversarial value (0 or 1)
std::vector<int> parity_values(const Game& g, int player);
// adversarial values as a requirement on controlled vertices (owner's value)
std::vector<ExtRat> adversarial_values(const Game& g);

// ---- stochastic (terminal mode); F masks edges by index

using EdgeSet = std::vector<char>;
EdgeSet all_edges(const Game& g);

// every F-profile reaches W with positive probability
Mask positive_prob_attractor(const Game& g, const Mask& W, const EdgeSet& F);

enum Role : char { MINE = 0, OPP = 1, RANDOM = 2 };
// chance vertices are RANDOM, the given player's vertices MINE, other players OPP
std::vector<char> roles_for(const Game& g, int player);

// MINE reaches target almost surely whatever OPP does; RANDOM moves uniformly along F
Mask almost_sure_reach(const Game& g, const std::vector<char>& role, const Mask& target, const EdgeSet& F);
// MINE reaches target with positive probability whatever OPP does
Mask positive_reach(const Game& g, const std::vector<char>& role, const Mask& target, const EdgeSet& F);

struct Partition {
    std::vector<char> pessimist;  // per player
};

// best extreme measure `player` can guarantee, from every vertex
std::vector<Q> extreme_values(const Game& g, const Partition& part, int player, const EdgeSet& F);
Q extreme_adversarial_value(const Game& g, const Partition& part, int v);

}
