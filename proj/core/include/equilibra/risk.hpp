#pragma once

#include "equilibra/equilibria.hpp"
#include "equilibra/game.hpp"
#include "equilibra/io.hpp"
#include "equilibra/memory.hpp"
#include "equilibra/zs.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eq {

using Real = boost::multiprecision::mpfr_float;

Partition all_pessimists(const Game& g);
Partition all_optimists(const Game& g);

// ---- measures of a profile (terminal mode)

struct ExtremeMeasures {
    std::vector<Q> pm;  // per player
    std::vector<Q> om;
    std::vector<Q> of(const Partition& part) const;
};

ExtremeMeasures extreme_measures(const Game& g, const Memory& profile);
std::vector<Q> extreme_measure(const Game& g, const Partition& part, const Memory& profile);

struct EntropicParams {
    std::optional<Q> base;  // unset: e
    std::vector<Q> rho;     // per player
    unsigned digits = 38;   // decimal digits of the working precision
};

struct RiskValue {
    std::optional<Q> exact;  // set when rho = 0
    Real value;
    std::string str(int digits = 12) const;
};

RiskValue entropic_measure(const Game& g, const EntropicParams& params, const Memory& profile, int player);

// ---- XRSE

bool verify_xrse(const Game& g, const Partition& part, const Memory& profile);

// one state, uniform over the successors kept in F at every controlled vertex
Memory stationary_profile(const Game& g, const EdgeSet& F);

// positional profile of the others minimizing the best measure of player i;
// player i takes its first edge
std::vector<int> punishing_profile(const Game& g, const Partition& part, int i);

// F-profiles with a switch to the punishing profiles on deviation. The
// friendly one draws a positional F-strategy at random once; the averse one
// is stationary.
Memory friendly_profile(const Game& g, const Partition& part, const EdgeSet& F);
Memory averse_profile(const Game& g, const Partition& part, const EdgeSet& F);

struct TraceStep {
    int k = 0;
    std::string phase;  // "main" or "refine"
    EdgeSet edges;
    std::map<int, Q> z;
    Mask vfrown;
    Mask A;
    std::map<int, Mask> W;
};

json trace_step_json(const Game& g, const TraceStep& s);
std::string trace_jsonl(const Game& g, const std::vector<TraceStep>& trace);

struct XrseRun {
    Answer answer = Answer::no;
    EdgeSet F;
    bool friendly = true;
    std::vector<TraceStep> trace;
};

XrseRun xrse_exists(const Game& g, const Partition& part);
XrseRun xrse_constrained_optimists(const Game& g, const Partition& part, const Thresholds& t);

struct XrseSearch {
    Answer answer = Answer::no;  // no means none found up to the bound
    std::optional<Memory> profile;
    long long tried = 0;
};

XrseSearch xrse_search_bounded(const Game& g, const Partition& part, const Thresholds& t, int bound);

// ---- entropic equilibria of stationary profiles

Real modified_payoff(const Q& x, const EntropicParams& params, int player);

struct ErseCheck {
    bool ok = false;
    std::vector<Real> value;  // modified expectation of the profile
    std::vector<Real> best;   // best response value
};

ErseCheck verify_erse_stationary(const Game& g, const EntropicParams& params, const Memory& profile,
                                 const Real& tolerance = Real("1e-20"));

}
