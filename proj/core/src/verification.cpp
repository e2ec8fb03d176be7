#include "equilibra/verification.hpp"
#include "equilibra/product.hpp"

namespace eq {

Concept parse_concept(const std::string& s)
{
    if (s == "nash" || s == "ne")
        return Concept::nash;
    if (s == "spe" || s == "subgame-perfect")
        return Concept::subgame_perfect;
    throw GameError("unknown rationality concept '" + s + "'");
}

const char* concept_name(Concept c)
{
    return c == Concept::nash ? "nash" : "spe";
}

namespace {

Answer negate(Answer a)
{
    if (a == Answer::yes)
        return Answer::no;
    if (a == Answer::no)
        return Answer::yes;
    return Answer::unknown;
}

Thresholds upper_only(const Game& g, int i, const Q& t)
{
    Thresholds th = open_thresholds(g);
    th.upper.at(i) = ExtRat(t);
    return th;
}

}

Answer universal_threshold(const Game& g, int i, const Q& t, Concept c)
{
    if (g.mode != Mode::parity && g.mode != Mode::mean_payoff)
        throw GameError(std::string("universal threshold not available in mode ") + mode_name(g.mode));
    Thresholds th = upper_only(g, i, t);
    if (c == Concept::nash)
        return negate(ne_constrained_exists(g, th).answer);
    if (g.mode == Mode::parity)
        return negate(spe_exists_parity(g, th).answer);
    return negate(spe_exists_mp(g, Q(0), th).answer);
}

Answer rational_verify(const Game& g, const Memory& m, const Q& t, Concept c)
{
    Product p = product_game(g, m);
    return universal_threshold(p.game, p.leader, t, c);
}

Achaotic achaotic_rational_verify_mp(const Game& g, const Memory& m, const Q& t)
{
    if (g.mode != Mode::mean_payoff)
        throw GameError("achaotic verification needs a mean-payoff game");
    Product p = product_game(g, m);
    Achaotic r;
    EpsMin e = epsilon_min_search(p.game);
    if (e.answer != Answer::yes)
        return r;
    r.eps = e.value;
    r.answer = negate(spe_exists_mp(p.game, e.value, upper_only(p.game, p.leader, t)).answer);
    return r;
}

}
