#pragma once

#include "equilibra/game.hpp"

#include <string>
#include <vector>

namespace eq {

struct MemTransition {
    int from = 0;
    int reads = 0;
    int to = 0;
    int emit = -1;  // only on controlled reads
    Q weight;       // meaningful when has_weight
    bool has_weight = false;
};

// Finite-state transducer for the players in `owners`. Reading vertex v in
// state q fires a transition (q, v, q'[, w]); on a controlled read the
// emitted w is the next vertex.
struct Memory {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<int> owners;
    std::vector<MemTransition> trans;

    int size() const { return (int)states.size(); }
    bool speaks_for(int player) const;
    bool controls(const Game& g, int v) const { return g.owner[v] >= 0 && speaks_for(g.owner[v]); }
    bool deterministic() const;
    // transitions enabled at (q, v), with effective probabilities
    std::vector<std::pair<const MemTransition*, Q>> enabled(const Game& g, int q, int v) const;
    void validate(const Game& g) const;
};

// one state that reads everything and never emits
Memory vacuous_memory(const Game& g, std::vector<int> owners = {});

}
