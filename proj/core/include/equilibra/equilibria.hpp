#pragma once

#include "equilibra/game.hpp"
#include "equilibra/io.hpp"
#include "equilibra/memory.hpp"
#include "equilibra/nego.hpp"

#include <map>
#include <optional>
#include <vector>

namespace eq {

enum class Answer { yes, no, unknown };
const char* answer_name(Answer a);

// per player, unset bounds are -inf / +inf
struct Thresholds {
    std::vector<ExtRat> lower;
    std::vector<ExtRat> upper;
};

Thresholds open_thresholds(const Game& g);
bool within(const Thresholds& t, const std::vector<ExtRat>& payoff);

// Mean-payoff play: a path from the initial vertex through Wp into W, then
// forever in W, player j's share of the time spent on cycles given by alpha[j].
// Its payoff is (min_j sum_c alpha[j][c] mp_i(c))_i.
struct MpPlay {
    std::vector<int> W;
    std::vector<int> Wp;
    std::vector<std::vector<int>> cycles;
    std::vector<std::vector<Q>> alpha;
    std::vector<Q> payoff;
};

std::vector<Q> seal_payoff(const Game& g, const std::vector<std::vector<int>>& cycles,
                           const std::vector<std::vector<Q>>& alpha);

// a lambda-consistent play from v0 with payoff inside the thresholds
std::optional<MpPlay> find_consistent_mp(const Game& g, const Requirement& lambda, int v0, const Thresholds& t);
std::optional<Lasso> find_consistent_parity(const Game& g, const Requirement& lambda, int v0, const Thresholds& t);

// ---- Nash

bool ne_outcome_check(const Game& g, const Lasso& l);

struct NeSearch {
    Answer answer = Answer::no;
    std::optional<Lasso> lasso;   // parity
    std::optional<MpPlay> play;   // mean-payoff
};

NeSearch ne_constrained_exists(const Game& g, const Thresholds& t);

// the play of a deterministic profile without chance vertices
Lasso profile_outcome(const Game& g, const Memory& profile);

// deterministic profile in an energy game
bool verify_ne_energy(const Game& g, const Memory& profile);
// parity, mean-payoff and energy (deterministic profiles), terminal (expectation)
bool verify_ne_generic(const Game& g, const Memory& profile);

// ---- subgame perfect, parity

// Prover proposes tau[v] at each vertex v. True iff Challenger cannot make
// player i beat lambda(u) from u.
bool check_reduced_prover_parity(const Game& g, const Requirement& lambda, int i, int u,
                                 const std::map<int, Lasso>& tau);

struct SpeParity {
    Answer answer = Answer::no;
    Requirement lambda;
    std::optional<Lasso> lasso;
};

SpeParity spe_exists_parity(const Game& g, const Thresholds& t);

// ---- subgame perfect, mean-payoff

// True iff Challenger cannot make player i earn more than alpha from v
// against the stationary Prover strategy tau.
bool mp_deviation_graph_value(const Game& g, const Requirement& lambda, int i, int v,
                              const ReducedStrategy& tau, const Q& alpha);

struct MpWitness {
    MpPlay play;
    Requirement lambda;
    std::map<int, ReducedStrategy> prover;
};

json witness_to_json(const Game& g, const MpWitness& w);
MpWitness witness_from_json(const Game& g, const json& j);

bool check_mp_witness(const Game& g, const Q& eps, const MpWitness& w, const Thresholds& t);

struct SpeMp {
    Answer answer = Answer::unknown;
    std::optional<MpWitness> witness;
    Requirement lambda;
    int iterations = 0;
};

SpeMp spe_exists_mp(const Game& g, const Q& eps, const Thresholds& t, int max_iters = 64);

struct EpsMin {
    Answer answer = Answer::unknown;  // yes when value is exact
    Q value;
};

EpsMin epsilon_min_search(const Game& g, int precision = 16, int max_iters = 64);

}
