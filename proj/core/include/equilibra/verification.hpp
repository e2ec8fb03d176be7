#pragma once

#include "equilibra/equilibria.hpp"
#include "equilibra/game.hpp"
#include "equilibra/memory.hpp"

#include <string>

namespace eq {

enum class Concept { nash, subgame_perfect };
Concept parse_concept(const std::string& s);
const char* concept_name(Concept c);

// yes iff no equilibrium gives player i a payoff <= t
Answer universal_threshold(const Game& g, int i, const Q& t, Concept c);

// universal threshold for the Leader of m in the product game
Answer rational_verify(const Game& g, const Memory& m, const Q& t, Concept c);

struct Achaotic {
    Answer answer = Answer::unknown;
    std::optional<Q> eps;
};

// every eps_min-SPE of the product gives the Leader more than t
Achaotic achaotic_rational_verify_mp(const Game& g, const Memory& m, const Q& t);

}
