#include "oracles.hpp"

#include "equilibra/nego.hpp"

#include <doctest.h>

using namespace eq;

namespace {

void require_agreement(const oracle::Agreement& a, int min_trials)
{
    INFO("first mismatch: ", a.first);
    CHECK(a.trials >= min_trials);
    CHECK(a.mismatches == 0);
}

}

TEST_CASE("nego is monotone and non-decreasing")
{
    require_agreement(oracle::nego_monotone_runs(200, 101), 200);
}

TEST_CASE("ne-check agrees with the value-based brute force")
{
    require_agreement(oracle::ne_outcome_runs(100, 202), 100);
}

TEST_CASE("XRSE verifier agrees with positional deviations")
{
    require_agreement(oracle::xrse_verifier_runs(100, 303), 100);
}

TEST_CASE("constrained optimists agree with exhaustive F")
{
    require_agreement(oracle::constrained_optimist_runs(50, 404, false), 50);
}

TEST_CASE("constrained optimists agree with exhaustive F on negative payoffs")
{
    require_agreement(oracle::constrained_optimist_runs(30, 405, true), 30);
}

TEST_CASE("energy NE verifier agrees with positional deviations")
{
    require_agreement(oracle::energy_runs(50, 606), 50);
}

TEST_CASE("SPE witnesses re-verify on random mean-payoff games")
{
    oracle::Rng rng(707);
    int yes = 0;
    for (int it = 0; it < 30; ++it) {
        Game g = oracle::random_game(rng, Mode::mean_payoff, 3, 2);
        auto t = open_thresholds(g);
        auto r = spe_exists_mp(g, Q(0), t, 16);
        if (r.answer != Answer::yes)
            continue;
        ++yes;
        REQUIRE(r.witness);
        CHECK(check_mp_witness(g, Q(0), *r.witness, t));
        auto back = witness_from_json(g, witness_to_json(g, *r.witness));
        CHECK(check_mp_witness(g, Q(0), back, t));
    }
    CHECK(yes > 0);
}

TEST_CASE("SPE outcomes are NE outcomes on random parity games")
{
    oracle::Rng rng(808);
    for (int it = 0; it < 60; ++it) {
        Game g = oracle::random_game(rng, Mode::parity, 3, 2);
        auto r = spe_exists_parity(g, open_thresholds(g));
        if (r.answer != Answer::yes)
            continue;
        REQUIRE(r.lasso);
        CHECK(ne_outcome_check(g, *r.lasso));
        CHECK(is_lambda_consistent(g, r.lambda, *r.lasso));
    }
}
