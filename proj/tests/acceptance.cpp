// One line per acceptance criterion. Exit status is the number of failures.

#include "oracles.hpp"

#include "equilibra/nego.hpp"
#include "equilibra/product.hpp"
#include "equilibra/risk.hpp"
#include "equilibra/verification.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace eq;

namespace {

constexpr double ENTROPIC_TOL = 1e-9;
constexpr double EXTREME_LIMIT_TOL = 0.05;
constexpr double EXTREME_RHO = 50;
constexpr int SPE_CAP = 16;
constexpr int XRSE_BOUND = 2;

int failures = 0;

void report(int id, const std::string& what, const std::function<bool(std::ostringstream&)>& body)
{
    std::ostringstream note;
    bool ok = false;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        note << "exception: " << e.what();
    }
    failures += !ok;
    std::printf("%s %2d %s", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!note.str().empty())
        std::printf(" [%s]", note.str().c_str());
    std::printf("\n");
    std::fflush(stdout);
}

Requirement req(std::initializer_list<ExtRat> xs) { return Requirement(xs); }

Thresholds exact(const Game& g, std::vector<Q> x)
{
    Thresholds t = open_thresholds(g);
    for (int i = 0; i < g.p(); ++i)
        t.lower[i] = t.upper[i] = ExtRat(x[i]);
    return t;
}

std::string show(const Requirement& r)
{
    std::string s;
    for (const auto& x : r)
        s += (s.empty() ? "" : ",") + x.str();
    return "(" + s + ")";
}

bool agree(std::ostringstream& note, const oracle::Agreement& a, int min_trials, bool yes_no = true)
{
    note << a.trials << " trials, ";
    if (yes_no)
        note << a.positives << " positive, ";
    note << a.mismatches << " mismatches";
    if (a.mismatches)
        note << ", first: " << a.first;
    return a.mismatches == 0 && a.trials >= min_trials;
}

double entropic(const Game& g, const Memory& m, double rho, std::optional<Q> base)
{
    EntropicParams p;
    p.base = base;
    p.rho = {Q(rho)};
    return entropic_measure(g, p, m, 0).value.convert_to<double>();
}

// -(1/rho) log_b (1/40 b^(-40 rho) + 39/40), with rho = 0 the expectation
long double lottery_closed_form(long double rho, long double b)
{
    if (rho == 0)
        return 1;
    long double s = std::pow(b, -40 * rho) / 40 + 39.0L / 40;
    return -std::log(s) / (rho * std::log(b));
}

}

int main()
{
    report(1, "negotiation on fig_ne_spe reaches its fixed point at step 2", [](auto& note) {
        auto g = oracle::corpus("fig_ne_spe");
        auto l1 = nego(g, vacuous_requirement(g));
        auto l2 = nego(g, l1);
        auto l3 = nego(g, l2);
        note << "l1=" << show(l1) << " l2=" << show(l2);
        return l1 == req({0, 1, 1}) && l2 == req({1, 1, 1}) && l3 == l2;
    });

    report(2, "sans_spe iterates climb to +inf and no SPE exists", [](auto& note) {
        auto g = oracle::corpus("sans_spe");
        auto s = nego_iterate(g, 16);
        const ExtRat inf = ExtRat::pos_inf();
        bool seq = s.iterates.size() == 5 && s.iterates[1] == req({1, 2, 1, 2}) &&
                   s.iterates[2] == req({2, 2, 1, 2}) && s.iterates[3] == req({2, 3, 1, 2}) &&
                   s.iterates[4] == req({inf, inf, 1, 2});
        bool none = spe_exists_mp(g, Q(0), open_thresholds(g)).answer == Answer::no;
        for (int x = 0; x <= 3; ++x) {
            auto t = open_thresholds(g);
            t.lower = {ExtRat(x), ExtRat(x)};
            none = none && spe_exists_mp(g, Q(0), t).answer == Answer::no;
            t = open_thresholds(g);
            t.upper = {ExtRat(x), ExtRat(x)};
            none = none && spe_exists_mp(g, Q(0), t).answer == Answer::no;
        }
        note << "iterates=" << s.iterates.size() << " last=" << show(s.iterates.back());
        return seq && none;
    });

    report(3, "not_stationary iterates follow 2 - 1/2^(n-1) and stay unknown at the cap", [](auto& note) {
        auto g = oracle::corpus("not_stationary");
        auto s = nego_iterate(g, 8);
        int a = g.vertex("a");
        bool ok = s.iterates.size() == 9;
        Q pow = 1;
        for (int n = 1; ok && n <= 8; ++n, pow *= 2)
            ok = s.iterates[n][a] == ExtRat(Q(2) - 1 / pow);
        auto r = spe_exists_mp(g, Q(0), open_thresholds(g), SPE_CAP);
        note << "lambda_8(a)=" << s.iterates.back()[a].str() << " spe=" << answer_name(r.answer);
        return ok && r.answer == Answer::unknown;
    });

    report(4, "inf_spe (1,1) is a fixed point with a re-verified witness", [](auto& note) {
        auto g = oracle::corpus("inf_spe");
        bool fixed = is_eps_fixed_point(g, req({1, 1}), Q(0));
        auto t = exact(g, {1, 1});
        auto r = spe_exists_mp(g, Q(0), t);
        bool witness = r.answer == Answer::yes && r.witness &&
                       check_mp_witness(g, Q(0), witness_from_json(g, witness_to_json(g, *r.witness)), t);
        note << "spe=" << answer_name(r.answer);
        return fixed && witness;
    });

    report(5, "fig_ne_spe has two NE outcomes and one SPE", [](auto& note) {
        auto g = oracle::corpus("fig_ne_spe");
        std::set<Lasso> accepted;
        for (const auto& l : simple_lassos(g, g.init))
            if (ne_outcome_check(g, l))
                accepted.insert(canonical(l));
        std::set<Lasso> expect = {canonical(parse_lasso(g, "(a)")), canonical(parse_lasso(g, "a.b(c)"))};
        auto low = spe_exists_parity(g, exact(g, {0, 0})).answer;
        auto high = spe_exists_parity(g, exact(g, {1, 1})).answer;
        note << accepted.size() << " NE outcomes, spe(0,0)=" << answer_name(low) << " spe(1,1)=" << answer_name(high);
        return accepted == expect && low == Answer::no && high == Answer::yes;
    });

    report(6, "eps-min of sans_spe is 1 and achaotic verification of chaos holds iff t < 0", [](auto& note) {
        auto g = oracle::corpus("sans_spe");
        auto e = epsilon_min_search(g);
        bool eps = e.answer == Answer::yes && e.value == 1;
        auto c = oracle::corpus("chaos");
        auto m = oracle::corpus_memory(c, "chaos_leader");
        bool iff = true;
        for (Q t : {Q(-1), Q(-1, 2), Q(-1, 1000), Q(0), Q(1, 1000), Q(1, 2), Q(1)}) {
            auto r = achaotic_rational_verify_mp(c, m, t);
            iff = iff && r.answer == (t < 0 ? Answer::yes : Answer::no);
        }
        note << "eps_min=" << q_str(e.value);
        return eps && iff;
    });

    report(7, "rational verification of fig_first_example with the one-player machine", [](auto& note) {
        auto g = oracle::corpus("fig_first_example");
        auto m = oracle::corpus_memory(g, "fig_ex_1player_machine");
        auto p = product_game(g, m);
        auto ne = rational_verify(g, m, Q(9, 10), Concept::nash);
        auto spe = rational_verify(g, m, Q(9, 10), Concept::subgame_perfect);
        note << p.game.n() << " product vertices, nash=" << answer_name(ne) << " spe=" << answer_name(spe);
        return p.game.n() == 10 && ne == Answer::yes && spe == Answer::yes;
    });

    report(8, "bounded XRSE search answers no/yes/yes on the three extreme examples", [](auto& note) {
        const std::vector<std::pair<const char*, Answer>> cases = {
            {"ex_extreme1", Answer::no}, {"ex_extreme2", Answer::yes}, {"ex_extreme3", Answer::yes}};
        bool ok = true;
        for (auto [name, expect] : cases) {
            auto g = oracle::corpus(name);
            auto r = xrse_search_bounded(g, all_pessimists(g), exact(g, {1, 1}), XRSE_BOUND);
            note << name << "=" << answer_name(r.answer) << " ";
            ok = ok && r.answer == expect;
            if (r.answer == Answer::yes)
                ok = ok && r.profile && verify_xrse(g, all_pessimists(g), *r.profile);
        }
        return ok;
    });

    report(9, "xrse_exists on ex_extreme1 drops exactly one of a->t1, b->t2", [](auto& note) {
        auto g = oracle::corpus("ex_extreme1");
        auto part = all_pessimists(g);
        auto r = xrse_exists(g, part);
        int at1 = g.edge(g.vertex("a"), g.vertex("t1")), bt2 = g.edge(g.vertex("b"), g.vertex("t2"));
        int removed = (int)std::count(r.F.begin(), r.F.end(), 0);
        auto m = stationary_profile(g, r.F);
        auto x = extreme_measure(g, part, m);
        note << "measures=(" << q_str(x[0]) << "," << q_str(x[1]) << ")";
        return removed == 1 && (!r.F[at1] != !r.F[bt2]) && verify_xrse(g, part, m) &&
               (x == std::vector<Q>{1, 2} || x == std::vector<Q>{2, 1});
    });

    report(10, "property suite: (a) nego monotone", [](auto& note) {
        return agree(note, oracle::nego_monotone_runs(200, 1001), 200, false);
    });
    report(10, "property suite: (b) ne-check vs brute force", [](auto& note) {
        return agree(note, oracle::ne_outcome_runs(100, 1002), 100);
    });
    report(10, "property suite: (c) verify_xrse vs positional deviations", [](auto& note) {
        return agree(note, oracle::xrse_verifier_runs(100, 1003), 100);
    });
    report(10, "property suite: (d) constrained optimists vs exhaustive F", [](auto& note) {
        return agree(note, oracle::constrained_optimist_runs(50, 1004, false), 50);
    });

    report(11, "entropic risk on the lottery", [](auto& note) {
        auto g = oracle::corpus("lottery");
        EdgeSet F = all_edges(g);
        F[g.edge(g.vertex("b"), g.vertex("t3"))] = 0;
        auto blue = stationary_profile(g, F);
        bool ok = true;
        for (double rho : {-1.0, 0.0, 1.0}) {
            double got = entropic(g, blue, rho, std::nullopt);
            double want = (double)lottery_closed_form(rho, std::exp(1.0L));
            ok = ok && std::fabs(got - want) <= ENTROPIC_TOL;
        }
        double om_e = entropic(g, blue, -EXTREME_RHO, std::nullopt);
        double pm_e = entropic(g, blue, EXTREME_RHO, std::nullopt);
        double om_10 = entropic(g, blue, -EXTREME_RHO, Q(10));
        double pm_10 = entropic(g, blue, EXTREME_RHO, Q(10));
        ok = ok && std::fabs(om_10 - 40) <= EXTREME_LIMIT_TOL && std::fabs(pm_10) <= EXTREME_LIMIT_TOL;
        auto h = g;
        Q c(7, 3);
        for (int v = 0; v < h.n(); ++v)
            if (h.owner[v] == TERMINAL)
                h.payoff[v][0] += c;
        auto blue_h = stationary_profile(h, F);
        for (double rho : {-3.0, -1.0, 0.5, 2.0}) {
            double shift = entropic(h, blue_h, rho, std::nullopt) - entropic(g, blue, rho, std::nullopt);
            ok = ok && std::fabs(shift - c.get_d()) <= ENTROPIC_TOL;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "rho=+-50: base 10 -> %.4f / %.6f, base e -> %.4f / %.6f", om_10, pm_10, om_e,
                      pm_e);
        note << buf;
        return ok;
    });

    report(12, "energy NE verification vs positional deviations", [](auto& note) {
        return agree(note, oracle::energy_runs(50, 1012), 50);
    });

    return failures;
}
