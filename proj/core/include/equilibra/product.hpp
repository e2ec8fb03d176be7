#pragma once

#include "equilibra/game.hpp"
#include "equilibra/memory.hpp"

namespace eq {

struct Product {
    Game game;                 // players: the base players, then Demon
    int leader = -1;
    int demon = -1;
    std::vector<int> base;     // product vertex -> base vertex
    std::vector<int> from_q;   // memory state read
    std::vector<int> to_q;     // chosen next state, -1 on (v, q) vertices
};

// Reachable part from (init, q0). Vertex names are "v|q" and "v|p|q".
Product product_game(const Game& g, const Memory& m);

// Game x profile memory where `player` moves freely and every other vertex
// follows the profile: as chance vertices in terminal mode, as single-edge
// vertices of `player` otherwise. Vertices are "v|q"; when the memory update
// after a free move is random the move goes through a chance vertex "v|q>w".
struct DeviationGame {
    Game game;
    std::vector<int> base;  // -1 on intermediate vertices
    std::vector<int> mem;
};

DeviationGame deviation_game(const Game& g, const Memory& profile, int player);

// Same game with one more player that owns nothing and copies `copy`'s payoff.
Game add_shadow_player(const Game& g, int copy, const std::string& name);

}
