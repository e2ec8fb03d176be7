#include "oracles.hpp"

#include "equilibra/chain.hpp"
#include "equilibra/risk.hpp"

#include <doctest.h>

using namespace eq;

namespace {

Thresholds exact(const Game& g, std::vector<Q> x)
{
    Thresholds t = open_thresholds(g);
    for (int i = 0; i < g.p(); ++i)
        t.lower[i] = t.upper[i] = ExtRat(x[i]);
    return t;
}

EdgeSet without(const Game& g, std::initializer_list<std::pair<const char*, const char*>> cut)
{
    EdgeSet F = all_edges(g);
    for (auto [u, v] : cut)
        F[g.edge(g.vertex(u), g.vertex(v))] = 0;
    return F;
}

double to_double(const Real& r) { return r.convert_to<double>(); }

}

TEST_CASE("extreme measures of the lottery policies")
{
    auto g = oracle::corpus("lottery");
    auto blue = stationary_profile(g, without(g, {{"b", "t3"}}));
    auto red = stationary_profile(g, without(g, {{"b", "c"}}));
    auto mb = extreme_measures(g, blue);
    CHECK(mb.pm[0] == 0);
    CHECK(mb.om[0] == 40);
    auto mr = extreme_measures(g, red);
    CHECK(mr.pm[0] == 1);
    CHECK(mr.om[0] == 1);
    EntropicParams p;
    p.rho = {Q(0)};
    auto e = entropic_measure(g, p, blue, 0);
    REQUIRE(e.exact);
    CHECK(*e.exact == 1);
}

TEST_CASE("extreme measure counts non-termination as 0")
{
    auto g = oracle::corpus("ex_extreme1");
    auto loop = stationary_profile(g, without(g, {{"a", "t1"}, {"b", "t2"}}));
    auto m = extreme_measures(g, loop);
    CHECK(m.pm == std::vector<Q>{0, 0});
    CHECK(m.om == std::vector<Q>{0, 0});
}

TEST_CASE("entropic measure closed forms")
{
    auto g = oracle::corpus("lottery");
    auto blue = stationary_profile(g, without(g, {{"b", "t3"}}));
    EntropicParams p;
    p.rho = {Q(1)};
    CHECK(to_double(entropic_measure(g, p, blue, 0).value) == doctest::Approx(0.025317807984).epsilon(1e-9));
    p.rho = {Q(-1)};
    // ln(1/40 e^40 + 39/40)
    CHECK(to_double(entropic_measure(g, p, blue, 0).value) == doctest::Approx(36.3111205458860638).epsilon(1e-12));
    p.base = Q(1);
    CHECK_THROWS_AS(entropic_measure(g, p, blue, 0), GameError);
}

TEST_CASE("entropic measure of a sure payoff is that payoff")
{
    auto g = oracle::corpus("lottery");
    auto red = stationary_profile(g, without(g, {{"b", "c"}}));
    for (int rho : {-7, -1, 1, 3, 50}) {
        EntropicParams p;
        p.rho = {Q(rho)};
        p.base = Q(3, 2);
        CHECK(to_double(entropic_measure(g, p, red, 0).value) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("translativity")
{
    auto g = oracle::corpus("lottery");
    auto h = g;
    for (int v = 0; v < h.n(); ++v)
        if (h.owner[v] == TERMINAL)
            h.payoff[v][0] += Q(7, 3);
    auto blue_g = stationary_profile(g, without(g, {{"b", "t3"}}));
    auto blue_h = stationary_profile(h, without(h, {{"b", "t3"}}));
    CHECK(extreme_measures(h, blue_h).pm[0] == extreme_measures(g, blue_g).pm[0] + Q(7, 3));
    for (int rho : {-2, 1, 5}) {
        EntropicParams p;
        p.rho = {Q(rho)};
        Real a = entropic_measure(g, p, blue_g, 0).value;
        Real b = entropic_measure(h, p, blue_h, 0).value;
        CHECK(to_double(abs(b - a - Real(7) / 3)) < 1e-9);
    }
}

TEST_CASE("randomizing everywhere in ex_extreme1 is not an XRSE")
{
    auto g = oracle::corpus("ex_extreme1");
    CHECK_FALSE(verify_xrse(g, all_pessimists(g), stationary_profile(g, all_edges(g))));
}

TEST_CASE("common coin witness of ex_extreme2")
{
    auto g = oracle::corpus("ex_extreme2");
    auto m = oracle::corpus_memory(g, "ex_extreme2_witness");
    CHECK(verify_xrse(g, all_pessimists(g), m));
    CHECK(extreme_measure(g, all_pessimists(g), m) == std::vector<Q>{1, 1});
}

TEST_CASE("single-player optimal policy is an XRSE")
{
    auto g = oracle::corpus("lottery");
    Partition pess = all_pessimists(g), opt = all_optimists(g);
    CHECK(verify_xrse(g, pess, stationary_profile(g, without(g, {{"b", "c"}}))));
    CHECK_FALSE(verify_xrse(g, pess, stationary_profile(g, without(g, {{"b", "t3"}}))));
    CHECK(verify_xrse(g, opt, stationary_profile(g, without(g, {{"b", "t3"}}))));
}

TEST_CASE("xrse_exists on ex_extreme1")
{
    auto g = oracle::corpus("ex_extreme1");
    auto part = all_pessimists(g);
    auto r = xrse_exists(g, part);
    int at1 = g.edge(g.vertex("a"), g.vertex("t1")), bt2 = g.edge(g.vertex("b"), g.vertex("t2"));
    CHECK(!r.F[at1] + !r.F[bt2] == 1);
    CHECK(std::count(r.F.begin(), r.F.end(), 0) == 1);
    auto m = stationary_profile(g, r.F);
    CHECK(verify_xrse(g, part, m));
    auto x = extreme_measure(g, part, m);
    CHECK((x == std::vector<Q>{1, 2} || x == std::vector<Q>{2, 1}));
}

TEST_CASE("xrse_exists without pessimists keeps every edge")
{
    auto g = oracle::corpus("ex_extreme3");
    auto r = xrse_exists(g, all_optimists(g));
    CHECK(r.F == all_edges(g));
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].W.empty());
}

TEST_CASE("xrse_exists rejects negative payoffs")
{
    auto g = oracle::corpus("ex_extreme1");
    g.payoff[g.vertex("t1")][0] = -1;
    CHECK_THROWS_AS(xrse_exists(g, all_pessimists(g)), GameError);
}

TEST_CASE("xrse_exists on a one-pessimist MDP matches the best edge subsets")
{
    // the pessimist keeps exactly the choices that a.s. secure the best measure
    Game g;
    g.mode = Mode::terminal;
    g.players = {"p"};
    int a = g.add_vertex("a", 0), b = g.add_vertex("b", 0), r = g.add_vertex("r", CHANCE);
    int t0 = g.add_vertex("t0", TERMINAL), t1 = g.add_vertex("t1", TERMINAL), t2 = g.add_vertex("t2", TERMINAL);
    g.payoff[t0] = {Q(0)};
    g.payoff[t1] = {Q(1)};
    g.payoff[t2] = {Q(2)};
    g.init = a;
    g.add_edge(a, b);
    g.add_edge(a, r);
    g.add_edge(b, t1);
    g.add_edge(b, t2);
    g.add_edge(r, t0);
    g.add_edge(r, t2);
    for (int e : g.out[r])
        g.edges[e].prob = Q(1, 2);
    g.validate();
    auto run = xrse_exists(g, all_pessimists(g));
    auto m = stationary_profile(g, run.F);
    CHECK(verify_xrse(g, all_pessimists(g), m));
    // best measure over all stationary supports
    Q best = -1;
    for (const auto& F : oracle::edge_subsets(g))
        best = std::max(best, extreme_measure(g, all_pessimists(g), stationary_profile(g, F))[0]);
    CHECK(extreme_measure(g, all_pessimists(g), m)[0] == best);
    CHECK(run.F == without(g, {{"a", "r"}, {"b", "t1"}}));
}

TEST_CASE("xrse_exists pessimist values never decrease")
{
    oracle::Rng rng(11);
    for (int it = 0; it < 60; ++it) {
        oracle::TerminalShape s;
        s.controlled = 3;
        s.chance = 1;
        s.terminals = 2;
        Game g = oracle::random_terminal_game(rng, 2, s);
        Partition part = all_pessimists(g);
        auto r = xrse_exists(g, part);
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
            for (auto& [i, z] : r.trace[k].z)
                CHECK(z >= r.trace[k - 1].z.at(i));
            CHECK(std::count(r.trace[k].edges.begin(), r.trace[k].edges.end(), 1) <
                  std::count(r.trace[k - 1].edges.begin(), r.trace[k - 1].edges.end(), 1));
        }
        CHECK(verify_xrse(g, part, stationary_profile(g, r.F)));
    }
}

TEST_CASE("bounded search on the three examples")
{
    for (auto [name, expect] : {std::pair{"ex_extreme1", Answer::no}, {"ex_extreme2", Answer::yes},
                                {"ex_extreme3", Answer::yes}}) {
        auto g = oracle::corpus(name);
        auto part = all_pessimists(g);
        auto r = xrse_search_bounded(g, part, exact(g, {1, 1}), 2);
        CHECK(r.answer == expect);
        if (r.profile) {
            CHECK(verify_xrse(g, part, *r.profile));
            CHECK(extreme_measure(g, part, *r.profile) == std::vector<Q>{1, 1});
        }
    }
}

TEST_CASE("constrained optimists on two-optimist ex_extreme1")
{
    auto g = oracle::corpus("ex_extreme1");
    auto part = all_optimists(g);
    // both terminals stay reachable, so each optimist sees 2
    auto yes = xrse_constrained_optimists(g, part, exact(g, {2, 2}));
    REQUIRE(yes.answer == Answer::yes);
    CHECK(yes.friendly);
    auto m = friendly_profile(g, part, yes.F);
    CHECK(verify_xrse(g, part, m));
    CHECK(extreme_measure(g, part, m) == std::vector<Q>{2, 2});
    CHECK(oracle::brute_constrained_optimists(g, exact(g, {2, 2})));
    // measure 1 for both would need both terminals unreachable
    auto no = xrse_constrained_optimists(g, part, exact(g, {1, 1}));
    CHECK(no.answer == Answer::no);
    CHECK_FALSE(oracle::brute_constrained_optimists(g, exact(g, {1, 1})));
    CHECK_THROWS_AS(xrse_constrained_optimists(g, all_pessimists(g), exact(g, {2, 2})), GameError);
}

namespace {

Game chain_game(Q pay, bool loop, bool shortcut)
{
    Game g;
    g.mode = Mode::terminal;
    g.players = {"p"};
    int a = g.add_vertex("a", 0), b = g.add_vertex("b", 0), t = g.add_vertex("t", TERMINAL);
    g.payoff[t] = {pay};
    g.init = a;
    g.add_edge(a, b);
    if (loop)
        g.add_edge(a, a);
    if (shortcut)
        g.add_edge(a, t);
    g.add_edge(b, t);
    g.validate();
    return g;
}

}

TEST_CASE("constrained optimists: single optimist and a single terminal")
{
    auto g = chain_game(5, false, false);
    auto r = xrse_constrained_optimists(g, all_optimists(g), exact(g, {5}));
    REQUIRE(r.answer == Answer::yes);
    CHECK(r.F == all_edges(g));
    // cycle-friendly: a self-loop costs nothing to an optimist
    auto h = chain_game(5, true, false);
    auto rh = xrse_constrained_optimists(h, all_optimists(h), exact(h, {5}));
    REQUIRE(rh.answer == Answer::yes);
    CHECK(rh.F == all_edges(h));
    CHECK(verify_xrse(h, all_optimists(h), friendly_profile(h, all_optimists(h), rh.F)));
}

TEST_CASE("constrained optimists: cycle-averse case")
{
    auto g = chain_game(-5, false, false);
    auto r = xrse_constrained_optimists(g, all_optimists(g), exact(g, {-5}));
    CHECK_FALSE(r.friendly);
    CHECK(r.answer == Answer::yes);
    // looping forever pays 0 > -5
    auto h = chain_game(-5, true, false);
    CHECK(xrse_constrained_optimists(h, all_optimists(h), exact(h, {-5})).answer == Answer::no);
    CHECK_FALSE(oracle::brute_constrained_optimists(h, exact(h, {-5})));
    // the final refinement drops the detour through b
    auto k = chain_game(-1, false, true);
    auto rk = xrse_constrained_optimists(k, all_optimists(k), exact(k, {-1}));
    REQUIRE(rk.answer == Answer::yes);
    CHECK(rk.F == without(k, {{"a", "b"}}));
    CHECK(rk.trace.back().phase == "refine");
    CHECK(verify_xrse(k, all_optimists(k), averse_profile(k, all_optimists(k), rk.F)));
}

TEST_CASE("stationary ERSE checks on the lottery")
{
    auto g = oracle::corpus("lottery");
    auto blue = stationary_profile(g, without(g, {{"b", "t3"}}));
    auto red = stationary_profile(g, without(g, {{"b", "c"}}));
    EntropicParams p;
    p.rho = {Q(0)};
    CHECK(verify_erse_stationary(g, p, blue).ok);
    CHECK(verify_erse_stationary(g, p, red).ok);
    p.rho = {Q(4)};
    CHECK(verify_erse_stationary(g, p, red).ok);
    CHECK_FALSE(verify_erse_stationary(g, p, blue).ok);
    p.rho = {Q(-4)};
    CHECK(verify_erse_stationary(g, p, blue).ok);
    CHECK_FALSE(verify_erse_stationary(g, p, red).ok);
}

TEST_CASE("stationary ERSE with rho = 0 agrees with the expectation NE check")
{
    oracle::Rng rng(5);
    for (int it = 0; it < 40; ++it) {
        oracle::TerminalShape s;
        s.controlled = 3;
        s.chance = 1;
        s.terminals = 2;
        s.minpay = -2;
        Game g = oracle::random_terminal_game(rng, 2, s);
        Memory m = oracle::random_stationary(rng, g);
        EntropicParams p;
        p.rho = {Q(0), Q(0)};
        CHECK(verify_erse_stationary(g, p, m).ok == verify_ne_generic(g, m));
    }
}
