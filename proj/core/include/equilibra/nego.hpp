#pragma once

#include "equilibra/game.hpp"
#include "equilibra/io.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eq {

Requirement vacuous_requirement(const Game& g);

// every suffix starting in a controlled vertex v pays owner(v) at least lambda(v)
bool is_lambda_consistent(const Game& g, const Requirement& lambda, const Lasso& l);

// Finite Prover/Challenger arena. Prover vertices (v, M), Challenger vertices (uv, M).
// Uncompressed, M is a set of vertices. Compressed (parity), M is a set of players
// whose requirement is 1, plus p() standing for a visited vertex with requirement +inf,
// and `flag` marks Prover vertices entered by a deviation.
struct ConcreteArena {
    enum Tag : char { PROPOSAL, ACCEPTATION, DEVIATION };
    struct Node {
        bool prover = true;
        int from = -1;  // Challenger vertices: the proposed edge from -> v
        int v = 0;
        std::vector<int> memory;
        int flag = 0;
    };

    bool compressed = false;
    int player = 0;
    std::vector<int> origins;
    std::vector<int> roots;  // node of each origin
    std::vector<Node> nodes;
    std::vector<std::vector<std::pair<int, Tag>>> succ;

    int size() const { return (int)nodes.size(); }
    std::string name(const Game& g, int k) const;
};

ConcreteArena build_concrete_nego(const Game& g, const Requirement& lambda, int player, int v0,
                                  bool compress = false);
ConcreteArena build_concrete_nego(const Game& g, const Requirement& lambda, int player,
                                  const std::vector<int>& origins, bool compress);

Requirement nego_parity(const Game& g, const Requirement& lambda);

// mean-payoff: h ends and c ends in the same vertex; the tail visits exactly W
struct PunishmentFamily {
    std::vector<int> h;
    std::vector<int> c;
    std::vector<int> W;
    std::vector<Q> x;

    bool operator==(const PunishmentFamily&) const = default;
};

// stationary Prover strategy: proposal at each vertex, absent means giving up
using ReducedStrategy = std::map<int, PunishmentFamily>;

struct MpNego {
    Requirement value;
    // for each controlled vertex v with finite value, a Prover strategy that
    // holds owner(v) to value(v) from v
    std::map<int, ReducedStrategy> strategy;
};

MpNego nego_mp_full(const Game& g, const Requirement& lambda, bool with_strategies);
Requirement nego_mp(const Game& g, const Requirement& lambda);

// dispatch on the mode
Requirement nego(const Game& g, const Requirement& lambda);

struct NegoSequence {
    std::vector<Requirement> iterates;  // lambda_0, lambda_1, ...
    bool converged = false;
};

// lambda_{k+1} = nego(lambda_k) - eps, from the vacuous requirement
NegoSequence nego_iterate(const Game& g, int max_iters = 64, const Q& eps = Q(0));

bool is_eps_fixed_point(const Game& g, const Requirement& lambda, const Q& eps);

}
