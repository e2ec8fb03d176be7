#include "equilibra/equilibria.hpp"
#include "equilibra/io.hpp"
#include "equilibra/nego.hpp"
#include "equilibra/product.hpp"
#include "equilibra/risk.hpp"
#include "equilibra/verification.hpp"
#include "equilibra/zs.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

using namespace eq;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string game, memory, profile, lasso, lambda, witness, trace;
    std::string eps = "0", t, concept_ = "spe", pessimists = "none", base = "e";
    std::vector<std::string> lower, upper, rho;
    int max = 64, bound = 2, precision = -1;
    std::string format = "json";
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> r;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            r.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        r.push_back(cur);
    return r;
}

Q rational(const std::string& s, const char* what)
{
    try {
        return parse_q(s);
    } catch (const std::exception&) {
        throw UsageError(std::string("bad rational for ") + what + ": '" + s + "'");
    }
}

int player_of(const Game& g, const std::string& name)
{
    try {
        return g.player(name);
    } catch (const GameError&) {
        throw UsageError("unknown player '" + name + "'");
    }
}

// "name=value" pairs, comma separated, possibly over several flags
std::map<int, std::string> assignments(const Game& g, const std::vector<std::string>& flags)
{
    std::map<int, std::string> r;
    for (const auto& f : flags)
        for (const auto& item : split(f, ',')) {
            auto eqp = item.find('=');
            if (eqp == std::string::npos)
                throw UsageError("expected name=value, got '" + item + "'");
            r[player_of(g, item.substr(0, eqp))] = item.substr(eqp + 1);
        }
    return r;
}

Thresholds thresholds(const Game& g, const Opts& o)
{
    Thresholds t = open_thresholds(g);
    for (auto& [i, v] : assignments(g, o.lower))
        t.lower[i] = ExtRat::parse(v);
    for (auto& [i, v] : assignments(g, o.upper))
        t.upper[i] = ExtRat::parse(v);
    return t;
}

Partition partition(const Game& g, const std::string& s)
{
    if (s == "all")
        return all_pessimists(g);
    Partition p = all_optimists(g);
    if (s == "none" || s.empty())
        return p;
    for (const auto& name : split(s, ','))
        p.pessimist[player_of(g, name)] = 1;
    return p;
}

EntropicParams entropic(const Game& g, const Opts& o)
{
    EntropicParams p;
    p.rho.assign(g.p(), Q(0));
    for (auto& [i, v] : assignments(g, o.rho))
        p.rho[i] = rational(v, "rho");
    if (o.base != "e")
        p.base = rational(o.base, "base");
    if (o.precision > 0)
        p.digits = std::max(10u, (unsigned)(o.precision * 0.30103) + 1);
    return p;
}

json edges_json(const Game& g, const EdgeSet& F)
{
    json a = json::array();
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (F[e])
            a.push_back(g.names[g.edges[e].from] + "->" + g.names[g.edges[e].to]);
    return a;
}

json payoff_json(const Game& g, const std::vector<ExtRat>& x)
{
    json j = json::object();
    for (int i = 0; i < g.p(); ++i)
        j[g.players[i]] = x[i].str();
    return j;
}

json payoff_json(const Game& g, const std::vector<Q>& x)
{
    json j = json::object();
    for (int i = 0; i < g.p(); ++i)
        j[g.players[i]] = q_str(x[i]);
    return j;
}

json play_json(const Game& g, const MpPlay& p)
{
    auto names = [&](const std::vector<int>& vs) {
        json a = json::array();
        for (int v : vs)
            a.push_back(g.names[v]);
        return a;
    };
    json j;
    j["W"] = names(p.W);
    j["Wp"] = names(p.Wp);
    json cyc = json::array();
    for (auto& c : p.cycles)
        cyc.push_back(cycle_id(g, c));
    j["cycles"] = cyc;
    j["payoff"] = payoff_json(g, p.payoff);
    return j;
}

Requirement lambda_of(const Game& g, const Opts& o)
{
    if (o.lambda.empty())
        return vacuous_requirement(g);
    json j;
    try {
        j = json::parse(read_file(o.lambda));
    } catch (const json::parse_error& e) {
        throw GameError(std::string("malformed requirement: ") + e.what());
    }
    return requirement_from_json(g, j);
}

void write_trace(const Game& g, const Opts& o, const std::vector<TraceStep>& trace)
{
    if (o.trace.empty())
        return;
    std::ofstream f(o.trace);
    if (!f)
        throw UsageError("cannot write trace file " + o.trace);
    f << trace_jsonl(g, trace);
}

std::string corpus_dir()
{
    if (const char* d = std::getenv("EQUILIBRA_CORPUS"))
        return d;
#ifdef EQ_CORPUS_DIR
    return EQ_CORPUS_DIR;
#else
    return "corpus";
#endif
}

json run(const std::string& cmd, const Opts& o)
{
    json out;
    if (cmd == "corpus") {
        std::vector<std::string> games, memories;
        for (auto& e : std::filesystem::directory_iterator(corpus_dir())) {
            if (e.path().extension() != ".json")
                continue;
            json j = json::parse(read_file(e.path().string()), nullptr, false);
            (j.is_object() && j.contains("players") ? games : memories).push_back(e.path().stem().string());
        }
        std::sort(games.begin(), games.end());
        std::sort(memories.begin(), memories.end());
        out["answer"] = "yes";
        out["dir"] = corpus_dir();
        out["games"] = games;
        out["memories"] = memories;
        return out;
    }

    Game g = load_game(o.game);
    auto need = [&](const std::string& v, const char* flag) {
        if (v.empty())
            throw UsageError(std::string("missing ") + flag);
        return v;
    };
    auto memory = [&](const std::string& path, const char* flag) { return load_memory(g, need(path, flag)); };
    Q eps = rational(o.eps, "--eps");

    if (cmd == "validate") {
        g.validate();
        out["answer"] = "yes";
        out["mode"] = mode_name(g.mode);
        out["vertices"] = g.n();
        out["edges"] = g.edges.size();
        if (!o.memory.empty()) {
            memory(o.memory, "--memory");
            out["memory"] = "valid";
        }
        return out;
    }
    if (cmd == "eval") {
        Lasso l = parse_lasso(g, need(o.lasso, "--lasso"));
        out["answer"] = "yes";
        out["lasso"] = lasso_str(g, l);
        out["payoff"] = payoff_json(g, eval_lasso(g, l));
        return out;
    }
    if (cmd == "nego") {
        out["answer"] = "yes";
        out["lambda"] = requirement_to_json(g, nego(g, lambda_of(g, o)));
        return out;
    }
    if (cmd == "nego-iterate") {
        auto s = nego_iterate(g, o.max, eps);
        json seq = json::array();
        for (auto& r : s.iterates)
            seq.push_back(requirement_to_json(g, r));
        out["answer"] = s.converged ? "yes" : "unknown";
        out["converged"] = s.converged;
        out["iterates"] = seq;
        return out;
    }
    if (cmd == "fixed-point") {
        bool ok = is_eps_fixed_point(g, lambda_of(g, o), eps);
        out["answer"] = ok ? "yes" : "no";
        return out;
    }
    if (cmd == "ne-check") {
        bool ok;
        if (!o.lasso.empty()) {
            ok = ne_outcome_check(g, parse_lasso(g, o.lasso));
        } else {
            Memory m = memory(o.profile, "--profile or --lasso");
            ok = verify_ne_generic(g, m);
        }
        out["answer"] = ok ? "yes" : "no";
        return out;
    }
    if (cmd == "ne-exists") {
        auto r = ne_constrained_exists(g, thresholds(g, o));
        out["answer"] = answer_name(r.answer);
        if (r.lasso) {
            out["lasso"] = lasso_str(g, *r.lasso);
            out["payoff"] = payoff_json(g, eval_lasso(g, *r.lasso));
        }
        if (r.play)
            out["play"] = play_json(g, *r.play);
        return out;
    }
    if (cmd == "spe-exists") {
        Thresholds t = thresholds(g, o);
        if (g.mode == Mode::parity) {
            auto r = spe_exists_parity(g, t);
            out["answer"] = answer_name(r.answer);
            out["lambda"] = requirement_to_json(g, r.lambda);
            if (r.lasso) {
                out["lasso"] = lasso_str(g, *r.lasso);
                out["payoff"] = payoff_json(g, eval_lasso(g, *r.lasso));
            }
            return out;
        }
        auto r = spe_exists_mp(g, eps, t, o.max);
        out["answer"] = answer_name(r.answer);
        out["iterations"] = r.iterations;
        out["lambda"] = requirement_to_json(g, r.lambda);
        if (r.witness)
            out["witness"] = witness_to_json(g, *r.witness);
        return out;
    }
    if (cmd == "spe-check-witness") {
        json j;
        try {
            j = json::parse(read_file(need(o.witness, "--witness")));
        } catch (const json::parse_error& e) {
            throw GameError(std::string("malformed witness: ") + e.what());
        }
        if (j.contains("witness"))
            j = j["witness"];
        bool ok = check_mp_witness(g, eps, witness_from_json(g, j), thresholds(g, o));
        out["answer"] = ok ? "yes" : "no";
        return out;
    }
    if (cmd == "eps-min") {
        auto r = epsilon_min_search(g, o.precision > 0 ? o.precision : 16, o.max);
        out["answer"] = answer_name(r.answer);
        if (r.answer == Answer::yes)
            out["eps"] = q_str(r.value);
        return out;
    }
    if (cmd == "product") {
        Product p = product_game(g, memory(o.memory, "--memory"));
        out["answer"] = "yes";
        out["leader"] = p.game.players[p.leader];
        out["demon"] = p.game.players[p.demon];
        out["vertices"] = p.game.n();
        out["game"] = game_to_json(p.game);
        return out;
    }
    if (cmd == "rational-verify") {
        Concept c = parse_concept(o.concept_);
        auto a = rational_verify(g, memory(o.memory, "--memory"), rational(need(o.t, "--t"), "--t"), c);
        out["answer"] = answer_name(a);
        out["concept"] = concept_name(c);
        return out;
    }
    if (cmd == "achaotic-verify") {
        auto a = achaotic_rational_verify_mp(g, memory(o.memory, "--memory"), rational(need(o.t, "--t"), "--t"));
        out["answer"] = answer_name(a.answer);
        if (a.eps)
            out["eps"] = q_str(*a.eps);
        return out;
    }
    if (cmd == "xrse-exists") {
        Partition part = partition(g, o.pessimists);
        auto r = xrse_exists(g, part);
        write_trace(g, o, r.trace);
        Memory m = stationary_profile(g, r.F);
        out["answer"] = answer_name(r.answer);
        out["F"] = edges_json(g, r.F);
        out["measures"] = payoff_json(g, extreme_measure(g, part, m));
        out["steps"] = r.trace.size();
        return out;
    }
    if (cmd == "xrse-constrained") {
        Partition part = partition(g, o.pessimists);
        auto r = xrse_constrained_optimists(g, part, thresholds(g, o));
        write_trace(g, o, r.trace);
        out["answer"] = answer_name(r.answer);
        out["case"] = r.friendly ? "cycle-friendly" : "cycle-averse";
        if (r.answer == Answer::yes)
            out["F"] = edges_json(g, r.F);
        out["steps"] = r.trace.size();
        return out;
    }
    if (cmd == "xrse-search") {
        Partition part = partition(g, o.pessimists);
        auto r = xrse_search_bounded(g, part, thresholds(g, o), o.bound);
        out["answer"] = answer_name(r.answer);
        out["tried"] = r.tried;
        if (r.profile) {
            out["profile"] = memory_to_json(g, *r.profile);
            out["measures"] = payoff_json(g, extreme_measure(g, part, *r.profile));
        }
        return out;
    }
    if (cmd == "xrse-verify") {
        Partition part = partition(g, o.pessimists);
        Memory m = memory(o.profile, "--profile");
        out["answer"] = verify_xrse(g, part, m) ? "yes" : "no";
        out["measures"] = payoff_json(g, extreme_measure(g, part, m));
        return out;
    }
    if (cmd == "er-eval") {
        Memory m = memory(o.profile, "--profile");
        EntropicParams p = entropic(g, o);
        auto ex = extreme_measures(g, m);
        json vals = json::object();
        for (int i = 0; i < g.p(); ++i) {
            auto v = entropic_measure(g, p, m, i);
            json x;
            x["value"] = v.str(20);
            x["exact"] = v.exact.has_value();
            x["PM"] = q_str(ex.pm[i]);
            x["OM"] = q_str(ex.om[i]);
            vals[g.players[i]] = x;
        }
        out["answer"] = "yes";
        out["measures"] = vals;
        return out;
    }
    if (cmd == "erse-verify") {
        Memory m = memory(o.profile, "--profile");
        auto r = verify_erse_stationary(g, entropic(g, o), m);
        out["answer"] = r.ok ? "yes" : "no";
        out["tolerance"] = "1e-20";
        json vals = json::object();
        for (int i = 0; i < g.p(); ++i)
            vals[g.players[i]] = {{"profile", r.value[i].str(20)}, {"best", r.best[i].str(20)}};
        out["values"] = vals;
        return out;
    }
    if (cmd == "energy-ne-verify") {
        out["answer"] = verify_ne_energy(g, memory(o.profile, "--profile")) ? "yes" : "no";
        return out;
    }
    throw UsageError("unknown subcommand " + cmd);
}

}

int main(int argc, char** argv)
{
    CLI::App app{"equilibra: equilibria in games on graphs"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--format", o.format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));

    struct Command {
        const char* name;
        const char* help;
        std::vector<std::string> flags;
    };
    const std::vector<Command> commands = {
        {"validate", "check a game (and optionally a memory structure)", {"memory"}},
        {"eval", "payoff of a lasso", {"lasso"}},
        {"nego", "one application of the negotiation function", {"lambda"}},
        {"nego-iterate", "iterate the negotiation function from the vacuous requirement", {"max", "eps"}},
        {"fixed-point", "is a requirement an eps-fixed point", {"lambda", "eps"}},
        {"ne-check", "NE outcome of a lasso, or NE check of a profile", {"lasso", "profile"}},
        {"ne-exists", "NE with payoff inside thresholds", {"lower", "upper"}},
        {"spe-exists", "(eps-)SPE with payoff inside thresholds", {"lower", "upper", "eps", "max"}},
        {"spe-check-witness", "re-verify a mean-payoff SPE witness", {"witness", "lower", "upper", "eps"}},
        {"eps-min", "least eps for which an eps-SPE exists", {"precision", "max"}},
        {"product", "product of a game with a Leader memory structure", {"memory"}},
        {"rational-verify", "does every equilibrium give Leader more than t", {"memory", "t", "concept"}},
        {"achaotic-verify", "achaotic rational verification (mean-payoff)", {"memory", "t"}},
        {"xrse-exists", "construct one stationary XRSE", {"pessimists", "trace"}},
        {"xrse-constrained", "constrained XRSE existence with optimists", {"pessimists", "lower", "upper", "trace"}},
        {"xrse-search", "search XRSEs with bounded memory", {"pessimists", "lower", "upper", "memory-bound"}},
        {"xrse-verify", "is a profile an XRSE", {"pessimists", "profile"}},
        {"er-eval", "entropic and extreme measures of a profile", {"profile", "rho", "base", "precision"}},
        {"erse-verify", "entropic equilibrium check of a stationary profile", {"profile", "rho", "base", "precision"}},
        {"energy-ne-verify", "NE check of a deterministic profile in an energy game", {"profile"}},
    };
    std::string chosen;
    for (const auto& s : commands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("game", o.game, "game file (JSON)")->required();
        sub->add_option("--format", o.format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));
        for (const auto& f : s.flags) {
            if (f == "memory") sub->add_option("--memory", o.memory, "Leader memory structure");
            if (f == "lasso") sub->add_option("--lasso", o.lasso, "lasso, as h(c)");
            if (f == "lambda") sub->add_option("--lambda", o.lambda, "requirement file");
            if (f == "max") sub->add_option("--max", o.max, "iteration cap");
            if (f == "eps") sub->add_option("--eps", o.eps, "epsilon, p/q");
            if (f == "profile") sub->add_option("--profile", o.profile, "strategy profile (memory structure)");
            if (f == "lower") sub->add_option("--lower", o.lower, "lower thresholds name=p/q,...")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
            if (f == "upper") sub->add_option("--upper", o.upper, "upper thresholds name=p/q,...")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
            if (f == "witness") sub->add_option("--witness", o.witness, "witness file");
            if (f == "precision") sub->add_option("--precision", o.precision, "bisection steps (eps-min) or bits");
            if (f == "t") sub->add_option("--t", o.t, "threshold, p/q");
            if (f == "concept") sub->add_option("--concept", o.concept_, "nash or spe");
            if (f == "pessimists") sub->add_option("--pessimists", o.pessimists, "name,...|all|none");
            if (f == "trace") sub->add_option("--trace", o.trace, "write the trace as JSON lines");
            if (f == "memory-bound") sub->add_option("--memory-bound", o.bound, "memory states");
            if (f == "rho") sub->add_option("--rho", o.rho, "risk parameters name=p/q,...")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
            if (f == "base") sub->add_option("--base", o.base, "e or p/q");
        }
        sub->callback([&chosen, name = std::string(s.name)] { chosen = name; });
    }
    CLI::App* corpus = app.add_subcommand("corpus", "list the bundled games");
    corpus->callback([&chosen] { chosen = "corpus"; });

    auto fail = [&](const std::string& msg) {
        json e;
        e["answer"] = "error";
        e["diagnostics"] = json::array({msg});
        std::cout << e.dump() << "\n";
        std::cerr << "error: " << msg << "\n";
        return 2;
    };
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(e.what());
    }
    try {
        json out = run(chosen, o);
        std::cout << (o.format == "pretty" ? out.dump(2) : out.dump()) << "\n";
        return 0;
    } catch (const UsageError& e) {
        return fail(e.what());
    } catch (const GameError& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
