#pragma once

#include "equilibra/equilibria.hpp"
#include "equilibra/game.hpp"
#include "equilibra/io.hpp"
#include "equilibra/memory.hpp"
#include "equilibra/zs.hpp"

#include <random>
#include <string>
#include <vector>

// Brute-force references for the property suites. They avoid the solvers
// under test: everything is enumeration over positional choices.
namespace oracle {

eq::Game corpus(const std::string& name);
eq::Memory corpus_memory(const eq::Game& g, const std::string& name);

using Rng = std::mt19937;

// every vertex reachable in-degree-wise, out-degree 1..maxdeg, init = v0
eq::Game random_game(Rng& rng, eq::Mode mode, int n, int p, int maxdeg = 2, int maxcolor = 3,
                     std::vector<int> rewards = {-1, 0, 1});

struct TerminalShape {
    int controlled = 3;
    int chance = 1;
    int terminals = 2;
    int maxpay = 3;
    int minpay = 0;
};
eq::Game random_terminal_game(Rng& rng, int p, const TerminalShape& s);

// a successor per controlled vertex (-1 elsewhere)
using Choice = std::vector<int>;
std::vector<Choice> positional_choices(const eq::Game& g, const std::vector<int>& players, const eq::EdgeSet& F = {});
eq::Memory positional_memory(const eq::Game& g, const Choice& c);
// play from v when every vertex follows c (no chance vertices)
eq::Lasso follow(const eq::Game& g, const Choice& c, int v);

// max over positional strategies of i, min over positional strategies of the others
std::vector<eq::ExtRat> brute_values(const eq::Game& g, int i);
bool brute_ne_outcome(const eq::Game& g, const eq::Lasso& l);

// stationary profile in terminal mode; positional deviations only
bool brute_xrse_stationary(const eq::Game& g, const eq::Partition& part, const eq::Memory& profile);

// deterministic positional profile in an energy game
bool brute_energy_ne(const eq::Game& g, const Choice& profile);

// some F-profile (friendly or averse by the thresholds) is an XRSE in range
bool brute_constrained_optimists(const eq::Game& g, const eq::Thresholds& t);

std::vector<eq::EdgeSet> edge_subsets(const eq::Game& g);

}

namespace oracle {

// random stationary profile with a nonempty support at every controlled vertex
eq::Memory random_stationary(Rng& rng, const eq::Game& g);

struct Agreement {
    int trials = 0;
    int mismatches = 0;
    int positives = 0;  // trials where the oracle said yes
    std::string first;  // description of the first mismatch

    void fail(const std::string& what)
    {
        if (mismatches++ == 0)
            first = what;
    }
};

// randomized agreement runs shared by the property suite and the acceptance binary
Agreement nego_monotone_runs(int count, unsigned seed);
Agreement ne_outcome_runs(int count, unsigned seed);
Agreement xrse_verifier_runs(int count, unsigned seed);
Agreement constrained_optimist_runs(int count, unsigned seed, bool signed_payoffs);
Agreement energy_runs(int count, unsigned seed);

}
