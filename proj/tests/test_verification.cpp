#include "oracles.hpp"

#include "equilibra/product.hpp"
#include "equilibra/verification.hpp"

#include <doctest.h>

using namespace eq;

TEST_CASE("universal threshold on fig_ne_spe")
{
    auto g = oracle::corpus("fig_ne_spe");
    int circle = g.player("circle");
    CHECK(universal_threshold(g, circle, Q(9, 10), Concept::subgame_perfect) == Answer::yes);
    CHECK(universal_threshold(g, circle, Q(9, 10), Concept::nash) == Answer::no);
}

TEST_CASE("universal threshold is vacuous without SPE")
{
    auto g = oracle::corpus("sans_spe");
    for (int i = 0; i < g.p(); ++i)
        for (int t : {-5, 0, 2, 10})
            CHECK(universal_threshold(g, i, Q(t), Concept::subgame_perfect) == Answer::yes);
    CHECK(universal_threshold(g, 0, Q(10), Concept::nash) == Answer::no);
}

TEST_CASE("rational verification of the one-player machine")
{
    auto g = oracle::corpus("fig_first_example");
    auto m = oracle::corpus_memory(g, "fig_ex_1player_machine");
    CHECK(product_game(g, m).game.n() == 10);
    CHECK(rational_verify(g, m, Q(9, 10), Concept::nash) == Answer::yes);
    CHECK(rational_verify(g, m, Q(9, 10), Concept::subgame_perfect) == Answer::yes);
    CHECK(rational_verify(g, m, Q(1), Concept::nash) == Answer::no);
}

TEST_CASE("temptation of chaos")
{
    auto g = oracle::corpus("chaos");
    auto m = oracle::corpus_memory(g, "chaos_leader");
    CHECK(rational_verify(g, m, Q(1), Concept::subgame_perfect) == Answer::yes);
    for (auto [t, expect] : std::vector<std::pair<Q, Answer>>{{Q(-1), Answer::yes},
                                                               {Q(-1, 2), Answer::yes},
                                                               {Q(-1, 100), Answer::yes},
                                                               {Q(0), Answer::no},
                                                               {Q(1, 2), Answer::no}}) {
        CAPTURE(q_str(t));
        auto r = achaotic_rational_verify_mp(g, m, t);
        CHECK(r.answer == expect);
        REQUIRE(r.eps);
        CHECK(*r.eps == 1);
    }
}

TEST_CASE("achaotic verification coincides with rational verification when an SPE exists")
{
    auto g = add_shadow_player(oracle::corpus("inf_spe"), 0, "leader");
    auto m = vacuous_memory(g, {g.player("leader")});
    for (int t : {0, 1, 2}) {
        auto a = achaotic_rational_verify_mp(g, m, Q(t));
        REQUIRE(a.eps);
        CHECK(*a.eps == 0);
        CHECK(a.answer == rational_verify(g, m, Q(t), Concept::subgame_perfect));
    }
}

TEST_CASE("rational verification with a vacuous structure is the universal threshold")
{
    oracle::Rng rng(71);
    for (int it = 0; it < 20; ++it) {
        Mode mode = it % 2 ? Mode::mean_payoff : Mode::parity;
        Game g = add_shadow_player(oracle::random_game(rng, mode, 3, 2), 0, "leader");
        int leader = g.player("leader");
        auto m = vacuous_memory(g, {leader});
        for (Concept c : {Concept::nash, Concept::subgame_perfect}) {
            Q t = mode == Mode::parity ? Q(1, 2) : Q((int)(rng() % 3) - 1);
            CHECK(rational_verify(g, m, t, c) == universal_threshold(g, leader, t, c));
        }
    }
}

TEST_CASE("threshold above every payoff")
{
    auto g = oracle::corpus("fig_first_example");
    auto m = oracle::corpus_memory(g, "fig_ex_1player_machine");
    CHECK(rational_verify(g, m, Q(100), Concept::nash) == Answer::no);
    CHECK(rational_verify(g, m, Q(100), Concept::subgame_perfect) == Answer::no);
}

TEST_CASE("concept names")
{
    CHECK(parse_concept("ne") == Concept::nash);
    CHECK(parse_concept("spe") == Concept::subgame_perfect);
    CHECK(std::string(concept_name(Concept::nash)) == "nash");
    CHECK_THROWS(parse_concept("pareto"));
}
