#pragma once

#include "equilibra/game.hpp"
#include "equilibra/memory.hpp"

#include <vector>

namespace eq {

struct Chain {
    std::vector<int> vertex;  // state -> game vertex
    std::vector<int> mem;     // state -> memory state
    std::vector<std::vector<std::pair<int, Q>>> next;
    int init = 0;

    int size() const { return (int)vertex.size(); }
};

// Reachable part from (init, q0); terminal states are absorbing (no successors).
Chain induced_chain(const Game& g, const Memory& profile);

// exact probability of ending in each state (zero for non-terminal states)
std::vector<Q> absorption(const Chain& c);

// true iff some reachable bottom component contains no absorbing state
bool may_run_forever(const Chain& c);

// payoff distribution of player i: (value, probability), values sorted, 0 for non-termination
std::vector<std::pair<Q, Q>> payoff_distribution(const Game& g, const Chain& c, int i);

// exact solution of a square system a x = b; throws if singular
std::vector<Q> solve_linear(std::vector<std::vector<Q>> a, std::vector<Q> b);

}
