#include "pac/abstract_check.hpp"
#include "pac/abstraction.hpp"
#include "pac/bench.hpp"
#include "pac/concrete.hpp"
#include "pac/errors.hpp"
#include "pac/model_io.hpp"
#include "pac/refine.hpp"
#include "pac/smt.hpp"
#include "pac/subgraph.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace pac;
using json = nlohmann::ordered_json;

namespace {

// Exit codes.
constexpr int kFound = 0;
constexpr int kNone = 1;
constexpr int kInputError = 2;

struct Config {
    std::string model;
    std::string effect;
    std::string w;
    std::string roots = "initial";
    std::string candidates = "single";
    int max_subset = 2;
    std::string templ;
    std::string preds;
    std::string alpha = "3/5";
    int max_rounds = 64;
    int bench_rounds = 1000;
    std::string w_strategy = "preserving";
    std::string format = "text";
    bool timing = false;
    int jobs = 1;
    std::string query;
    std::string seed;
    std::string out;
    std::string cause;
    std::vector<std::string> splits;
    bool unordered = false;
    std::string solver_output;
    bool abstract_decode = false;
    std::string spec;
    int cases = 3;
    long budget = 0;
    int max_depth = 0;
    long timeout_ms = 60000;
    bool json_model = false;
    std::size_t path_cap = kDefaultPathCap;
    bool fallback_concrete = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value query file; its values override the command line.
void apply_query_file(Config& c)
{
    std::istringstream in(read_file(c.query));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SyntaxError("expected key=value in " + c.query, lineno, 1);
        std::string k = trim(line.substr(0, eq));
        std::string v = trim(line.substr(eq + 1));
        auto to_int = [&](const std::string& s) {
            try {
                return std::stoi(s);
            } catch (const std::exception&) {
                throw SyntaxError("expected an integer for " + k, lineno, static_cast<int>(eq) + 2);
            }
        };
        if (k == "model")
            c.model = v;
        else if (k == "effect")
            c.effect = v;
        else if (k == "w")
            c.w = v;
        else if (k == "roots")
            c.roots = v;
        else if (k == "candidates")
            c.candidates = v;
        else if (k == "max_subset")
            c.max_subset = to_int(v);
        else if (k == "template")
            c.templ = v;
        else if (k == "preds")
            c.preds = v;
        else if (k == "alpha")
            c.alpha = v;
        else if (k == "max_rounds")
            c.max_rounds = to_int(v);
        else if (k == "w_strategy")
            c.w_strategy = v;
        else if (k == "jobs")
            c.jobs = to_int(v);
        else if (k == "seed")
            c.seed = v;
        else if (k == "cause")
            c.cause = v;
        else
            throw SyntaxError("unknown query key '" + k + "'", lineno, 1);
    }
}

void require(const std::string& value, const char* flag)
{
    if (value.empty())
        throw UsageError(std::string("missing required option ") + flag);
}

std::vector<std::string> split_names(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

StateId find_state(const Dtmc& m, const std::string& name)
{
    StateId s = m.find(name);
    if (s < 0)
        throw QueryError("unknown state '" + name + "'");
    return s;
}

std::uint64_t resolve_seed(const Config& c, std::uint64_t fallback)
{
    std::string s = c.seed;
    if (s.empty())
        if (const char* env = std::getenv("PAC_SEED"))
            s = env;
    if (s.empty())
        return fallback;
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("seed must be a non-negative integer, got '" + s + "'");
    }
}

struct Session {
    Config cfg;
    std::ostringstream out;

    bool records() const { return cfg.format == "records"; }

    const Dtmc& model()
    {
        if (!model_) {
            require(cfg.model, "--model");
            model_ = std::make_unique<Dtmc>(load_model(cfg.model));
        }
        return *model_;
    }

    PacQuery query()
    {
        require(cfg.effect, "--effect");
        PacQuery q;
        q.model = &model();
        q.effect = parse_predicate(cfg.effect);
        q.contingencies = parse_predicate_list(cfg.w);
        if (cfg.roots == "initial") {
            q.roots = RootPolicy::InitialOnly;
        } else if (cfg.roots == "all") {
            q.roots = RootPolicy::AllStates;
        } else {
            q.roots = RootPolicy::Explicit;
            for (const auto& n : split_names(cfg.roots))
                q.explicit_roots.push_back(find_state(model(), n));
            std::sort(q.explicit_roots.begin(), q.explicit_roots.end());
        }
        if (cfg.candidates == "single") {
            q.candidates = CandidatePolicy::SingleState;
        } else if (cfg.candidates == "subsets") {
            q.candidates = CandidatePolicy::Subsets;
        } else if (cfg.candidates == "template") {
            q.candidates = CandidatePolicy::PredicateTemplate;
            q.template_atoms = parse_predicate_list(cfg.templ);
        } else {
            throw UsageError("--candidates must be single, subsets or template");
        }
        q.max_subset = cfg.max_subset;
        q.jobs = cfg.jobs;
        return q;
    }

    AbstractPacQuery abs_query()
    {
        PacQuery c = query();
        AbstractPacQuery q;
        q.model = c.model;
        q.effect = c.effect;
        q.contingencies = c.contingencies;
        q.roots = c.roots;
        q.explicit_roots = c.explicit_roots;
        q.candidates = c.candidates;
        q.max_subset = c.max_subset;
        q.jobs = c.jobs;
        if (cfg.w_strategy == "preserving")
            q.strategy = WStrategy::WPreserving;
        else if (cfg.w_strategy == "subgraphs")
            q.strategy = WStrategy::Subgraphs;
        else
            throw UsageError("--w-strategy must be preserving or subgraphs");
        return q;
    }

    Rational alpha() const { return parse_rational(cfg.alpha); }

    Abstraction abstraction(const AbstractPacQuery& q)
    {
        require(cfg.preds, "--preds");
        auto preds = parse_predicate_list(cfg.preds);
        bool preserve = !q.contingencies.empty() && q.strategy == WStrategy::WPreserving;
        Abstraction a = abstract(*q.model, preds, preserve ? AbsMode::WPreserving : AbsMode::Plain, q.contingencies);
        if (!cfg.splits.empty()) {
            Profile ev = prob_eventually(*q.model, satisfying_set(q.effect, *q.model));
            for (const auto& name : cfg.splits) {
                StateId t = a.find(name);
                if (t < 0)
                    throw QueryError("unknown abstract state '" + name + "'");
                a = refine_split(a, t, alpha(), ev);
            }
        }
        return a;
    }

    void write_artifact(const std::string& text)
    {
        if (cfg.out.empty()) {
            out << text;
            return;
        }
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f)
            throw QueryError("cannot write " + cfg.out);
        f << text;
        out << "wrote " << cfg.out << '\n';
    }

    void report(const Dtmc& m, const CauseReport& r)
    {
        if (records()) {
            json j;
            j["result"] = "cause";
            std::vector<std::string> names;
            for (StateId s : r.cause)
                names.push_back(m.state(s).name);
            j["cause"] = names;
            j["predicate"] = r.cause_predicate.to_string();
            j["root"] = m.state(r.root).name;
            j["p_aw"] = to_string(r.p_aw);
            j["p_cw"] = to_string(r.p_cw);
            j["cf_root"] = r.cf_root >= 0 ? json(m.state(r.cf_root).name) : json(nullptr);
            if (r.round > 0)
                j["round"] = r.round;
            if (!r.abstract_cause.empty())
                j["abstract_cause"] = r.abstract_cause;
            out << j.dump() << '\n';
            return;
        }
        out << "cause: " << describe(m, r.cause) << '\n';
        out << "predicate: " << r.cause_predicate.to_string() << '\n';
        if (!r.abstract_cause.empty()) {
            std::string names;
            for (const auto& n : r.abstract_cause)
                names += (names.empty() ? "" : ", ") + n;
            out << "abstract cause: {" << names << "}";
            if (r.round > 0)
                out << " in round " << r.round;
            out << '\n';
        }
        out << "root: " << m.state(r.root).name << '\n';
        out << "p_AW = " << to_string(r.p_aw) << " (" << to_display(r.p_aw) << ")\n";
        out << "p_CW = " << to_string(r.p_cw) << " (" << to_display(r.p_cw) << ")";
        if (r.cf_root >= 0)
            out << " at " << m.state(r.cf_root).name;
        out << '\n';
    }

    int no_cause(const std::string& what = "no cause found")
    {
        if (records())
            out << json{{"result", "none"}}.dump() << '\n';
        else
            out << what << '\n';
        return kNone;
    }

private:
    std::unique_ptr<Dtmc> model_;
};

// ---- subcommands -------------------------------------------------------------

int cmd_validate(Session& s)
{
    const Dtmc& m = s.model();
    std::size_t edges = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        edges += m.successors(static_cast<StateId>(i)).size();
    if (s.records())
        s.out << json{{"result", "ok"}, {"states", m.size()}, {"transitions", edges}}.dump() << '\n';
    else
        s.out << "ok: " << m.size() << " states, " << edges << " transitions\n";
    return kFound;
}

int cmd_check(Session& s)
{
    require(s.cfg.cause, "--cause");
    PacQuery q = s.query();
    StateSet cause;
    for (const auto& n : split_names(s.cfg.cause))
        cause.push_back(find_state(*q.model, n));
    std::sort(cause.begin(), cause.end());
    CheckResult r = check_cause(q, cause);
    const Dtmc& m = *q.model;
    if (s.records()) {
        for (const auto& v : r.verdicts) {
            json j;
            j["root"] = m.state(v.root).name;
            j["p_aw"] = to_string(v.p_aw);
            j["pc1"] = v.pc1;
            j["cf_root"] = v.worst_cf_root >= 0 ? json(m.state(v.worst_cf_root).name) : json(nullptr);
            j["p_cw"] = to_string(v.p_cw);
            j["pc2"] = v.pc2;
            s.out << j.dump() << '\n';
        }
        s.out << json{{"result", r.confirmed ? "confirmed" : "refuted"}, {"diagnostic", r.diagnostic}}.dump() << '\n';
    } else {
        for (const auto& v : r.verdicts) {
            s.out << "root " << m.state(v.root).name << ": p_AW = " << to_string(v.p_aw) << ", p_CW = "
                  << to_string(v.p_cw);
            if (v.worst_cf_root >= 0)
                s.out << " at " << m.state(v.worst_cf_root).name;
            s.out << (v.pc1 && v.pc2 ? ", holds" : ", fails") << '\n';
        }
        if (!r.diagnostic.empty())
            s.out << r.diagnostic << '\n';
        s.out << describe(m, cause) << (r.confirmed ? " is a cause\n" : " is not a cause\n");
    }
    return r.confirmed ? kFound : kNone;
}

int cmd_discover(Session& s)
{
    PacQuery q = s.query();
    auto r = discover(q);
    if (!r)
        return s.no_cause();
    s.report(*q.model, *r);
    return kFound;
}

int cmd_abs_discover(Session& s)
{
    AbstractPacQuery q = s.abs_query();
    if (!q.contingencies.empty() && q.strategy == WStrategy::Subgraphs)
        throw UsageError("abs-discover runs one pass on the whole chain; use refine for the subgraph strategy");
    Abstraction a = s.abstraction(q);
    AbsDiscovery d = discover_abs(a, q);
    if (!s.records()) {
        s.out << a.size() << " abstract states\n" << a.abs_map();
        s.out << "effect: " << describe(a, d.effect) << '\n';
        if (!d.mixed.empty())
            s.out << "warning: effect splits " << describe(a, d.mixed) << '\n';
        for (const auto& sp : d.spurious)
            s.out << "spurious: " << describe(a, sp) << '\n';
    }
    if (!d.report) {
        if (s.cfg.fallback_concrete) {
            PacQuery cq = concrete_query(a, q);
            if (auto r = discover(cq)) {
                if (!s.records())
                    s.out << "fallback: concrete search\n";
                s.report(*q.model, *r);
                return kFound;
            }
        }
        return s.no_cause();
    }
    s.report(*q.model, *d.report);
    return kFound;
}

int cmd_refine(Session& s)
{
    AbstractPacQuery q = s.abs_query();
    require(s.cfg.preds, "--preds");
    RefineOptions opt;
    opt.predicates = parse_predicate_list(s.cfg.preds);
    opt.alpha = s.alpha();
    opt.max_rounds = s.cfg.max_rounds;
    opt.path_cap = s.cfg.path_cap;
    RefineResult r = run(q, opt);
    s.out << render_trace(r.trace, s.records(), s.cfg.timing);
    if (!r.report) {
        if (s.cfg.fallback_concrete) {
            PacQuery cq = concrete_query(abstract(*q.model, opt.predicates), q);
            if (auto c = discover(cq)) {
                if (!s.records())
                    s.out << "fallback: concrete search\n";
                s.report(*q.model, *c);
                return kFound;
            }
        }
        return s.no_cause();
    }
    s.report(*q.model, *r.report);
    return kFound;
}

int cmd_subgraphs(Session& s)
{
    require(s.cfg.w, "--w");
    const Dtmc& m = s.model();
    auto W = parse_predicate_list(s.cfg.w);
    auto subs = enumerate_subgraphs(m, W, s.cfg.path_cap);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const auto& g = subs[i];
        std::vector<std::string> names;
        for (const auto& st : g.model.states())
            names.push_back(st.name);
        if (s.records()) {
            json j;
            j["index"] = i;
            j["signature"] = signature_string(g.signature, W);
            j["paths"] = g.paths;
            j["states"] = names;
            s.out << j.dump() << '\n';
        } else {
            s.out << i << ' ' << signature_string(g.signature, W) << ": " << g.paths << " paths, states";
            for (const auto& n : names)
                s.out << ' ' << n;
            s.out << '\n';
        }
    }
    return kFound;
}

int cmd_export_smt(Session& s)
{
    PacQuery q = s.query();
    s.write_artifact(export_smt(q, !s.cfg.unordered).text);
    return kFound;
}

int cmd_export_smt_abs(Session& s)
{
    AbstractPacQuery q = s.abs_query();
    Abstraction a = s.abstraction(q);
    s.write_artifact(export_smt_abs(a, q, !s.cfg.unordered).text);
    return kFound;
}

int cmd_decode_smt(Session& s)
{
    require(s.cfg.solver_output, "--solver-output");
    std::string text = read_file(s.cfg.solver_output);
    std::optional<CauseReport> r;
    if (s.cfg.abstract_decode) {
        AbstractPacQuery q = s.abs_query();
        Abstraction a = s.abstraction(q);
        r = decode_smt_model_abs(a, q, text);
    } else {
        r = decode_smt_model(s.query(), text);
    }
    if (!r)
        return s.no_cause("unsat: no cause");
    s.report(s.model(), *r);
    return kFound;
}

GenSpec base_spec(const Config& c)
{
    GenSpec g;
    if (!c.spec.empty())
        g = parse_genspec(read_file(c.spec));
    g.seed = resolve_seed(c, g.seed);
    if (c.budget > 0)
        g.budget = static_cast<std::size_t>(c.budget);
    if (c.max_depth > 0)
        g.max_depth = c.max_depth;
    return g;
}

int cmd_gen(Session& s)
{
    GenSpec g = base_spec(s.cfg);
    Dtmc m = generate(g);
    s.write_artifact(s.cfg.json_model ? serialize_json(m) + "\n" : serialize_text(m));
    return kFound;
}

int cmd_bench(Session& s)
{
    BenchTemplate t;
    if (!s.cfg.effect.empty())
        t.effect = s.cfg.effect;
    if (!s.cfg.preds.empty()) {
        t.predicates.clear();
        for (const auto& p : parse_predicate_list(s.cfg.preds))
            t.predicates.push_back(p.to_string());
    }
    t.alpha = s.alpha();
    t.max_rounds = s.cfg.bench_rounds;
    t.timeout_ms = s.cfg.timeout_ms;
    t.jobs = s.cfg.jobs;
    BenchReport rep;
    if (!s.cfg.model.empty()) {
        rep.rows.push_back(compare_model(s.cfg.model, s.model(), t));
    } else {
        GenSpec g = base_spec(s.cfg);
        std::vector<GenSpec> specs;
        for (int i = 0; i < s.cfg.cases; ++i) {
            specs.push_back(g);
            specs.back().seed = g.seed + static_cast<std::uint64_t>(i);
        }
        rep = compare(specs, t);
    }
    s.out << render_report(rep, s.records(), s.cfg.timing);
    bool all = std::all_of(rep.rows.begin(), rep.rows.end(), [](const BenchRow& r) { return r.agree; });
    return all ? kFound : kNone;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probabilistic actual causes in Markov chains"};
    app.require_subcommand(1);
    Session s;
    Config& c = s.cfg;

    auto add_model = [&](CLI::App* sub) { sub->add_option("-m,--model", c.model, "model file (text or JSON)"); };
    auto add_query = [&](CLI::App* sub) {
        add_model(sub);
        sub->add_option("-e,--effect", c.effect, "effect predicate");
        sub->add_option("--w", c.w, "contingency predicates, ';'-separated");
        sub->add_option("--roots", c.roots, "initial | all | comma-separated state names");
        sub->add_option("--candidates", c.candidates, "single | subsets | template");
        sub->add_option("--max-subset", c.max_subset, "largest candidate set or conjunction");
        sub->add_option("--template", c.templ, "template atoms, ';'-separated");
        sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--query", c.query, "key=value query file; wins over flags");
    };
    auto add_abs = [&](CLI::App* sub) {
        add_query(sub);
        sub->add_option("--preds", c.preds, "abstraction predicates, ';'-separated");
        sub->add_option("--alpha", c.alpha, "split ratio");
        sub->add_option("--w-strategy", c.w_strategy, "preserving | subgraphs");
        sub->add_option("--split", c.splits, "abstract state to split before the pass; repeatable");
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "text | records")->check(CLI::IsMember({"text", "records"}));
    };

    std::map<CLI::App*, int (*)(Session&)> handlers;

    auto* validate = app.add_subcommand("validate", "check a model file against the chain invariants");
    add_model(validate);
    add_format(validate);
    handlers[validate] = cmd_validate;

    auto* check = app.add_subcommand("check", "verify a given cause");
    add_query(check);
    add_format(check);
    check->add_option("--cause", c.cause, "comma-separated state names");
    handlers[check] = cmd_check;

    auto* disc = app.add_subcommand("discover", "search the concrete chain for a cause");
    add_query(disc);
    add_format(disc);
    handlers[disc] = cmd_discover;

    auto* absd = app.add_subcommand("abs-discover", "one search pass on a predicate abstraction");
    add_abs(absd);
    add_format(absd);
    absd->add_flag("--fallback-concrete", c.fallback_concrete, "search the concrete chain when none is found");
    handlers[absd] = cmd_abs_discover;

    auto* ref = app.add_subcommand("refine", "abstraction refinement loop");
    add_abs(ref);
    add_format(ref);
    ref->add_option("--max-rounds", c.max_rounds, "round limit")->check(CLI::PositiveNumber);
    ref->add_option("--path-cap", c.path_cap, "path limit for the subgraph strategy");
    ref->add_flag("--timing", c.timing, "report wall-clock time per round");
    ref->add_flag("--fallback-concrete", c.fallback_concrete, "search the concrete chain when none is found");
    handlers[ref] = cmd_refine;

    auto* subs = app.add_subcommand("subgraphs", "group paths by their W-trace");
    add_model(subs);
    add_format(subs);
    subs->add_option("--w", c.w, "contingency predicates, ';'-separated");
    subs->add_option("--path-cap", c.path_cap, "path limit");
    handlers[subs] = cmd_subgraphs;

    auto* esmt = app.add_subcommand("export-smt", "write the SMT-LIB instance of a concrete query");
    add_query(esmt);
    esmt->add_option("-o,--out", c.out, "output file (default stdout)");
    esmt->add_flag("--unordered", c.unordered, "omit the search-order constraints");
    handlers[esmt] = cmd_export_smt;

    auto* esmta = app.add_subcommand("export-smt-abs", "write the SMT-LIB instance of an abstract query");
    add_abs(esmta);
    esmta->add_option("-o,--out", c.out, "output file (default stdout)");
    esmta->add_flag("--unordered", c.unordered, "omit the search-order constraints");
    handlers[esmta] = cmd_export_smt_abs;

    auto* dsmt = app.add_subcommand("decode-smt", "read a solver model back and verify the cause");
    add_abs(dsmt);
    add_format(dsmt);
    dsmt->add_option("--solver-output", c.solver_output, "file with the solver's check-sat and get-model output");
    dsmt->add_flag("--abstract", c.abstract_decode, "the instance came from export-smt-abs");
    handlers[dsmt] = cmd_decode_smt;

    auto* gen = app.add_subcommand("gen", "generate a random chain");
    gen->add_option("--spec", c.spec, "generator config (key=value lines)");
    gen->add_option("--seed", c.seed, "seed (falls back to PAC_SEED)");
    gen->add_option("--budget", c.budget, "state budget");
    gen->add_option("--max-depth", c.max_depth, "layer limit");
    gen->add_flag("--json", c.json_model, "write JSON instead of text");
    gen->add_option("-o,--out", c.out, "output file (default stdout)");
    handlers[gen] = cmd_gen;

    auto* bench = app.add_subcommand("bench", "compare concrete search with abstraction refinement");
    add_model(bench);
    add_format(bench);
    bench->add_option("--spec", c.spec, "generator config (key=value lines)");
    bench->add_option("--seed", c.seed, "first seed (falls back to PAC_SEED)");
    bench->add_option("--cases", c.cases, "number of generated models")->check(CLI::PositiveNumber);
    bench->add_option("--budget", c.budget, "state budget per model");
    bench->add_option("--max-depth", c.max_depth, "layer limit per model");
    bench->add_option("-e,--effect", c.effect, "effect predicate");
    bench->add_option("--preds", c.preds, "abstraction predicates, ';'-separated");
    bench->add_option("--alpha", c.alpha, "split ratio");
    bench->add_option("--max-rounds", c.bench_rounds, "round limit")->check(CLI::PositiveNumber);
    bench->add_option("--timeout-ms", c.timeout_ms, "per-pipeline timeout")->check(CLI::PositiveNumber);
    bench->add_option("--jobs", c.jobs, "cases run in parallel")->check(CLI::PositiveNumber);
    bench->add_flag("--timing", c.timing, "print times and the improvement");
    handlers[bench] = cmd_bench;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    int code = kInputError;
    try {
        if (!c.query.empty())
            apply_query_file(c);
        for (auto& [sub, fn] : handlers)
            if (sub->parsed())
                code = fn(s);
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid model: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    std::cout << s.out.str();
    return code;
}
