// End-to-end acceptance checks. One PASS/FAIL line per criterion.

#include "pac/abstract_check.hpp"
#include "pac/abstraction.hpp"
#include "pac/bench.hpp"
#include "pac/concrete.hpp"
#include "pac/errors.hpp"
#include "pac/model_io.hpp"
#include "pac/refine.hpp"
#include "pac/subgraph.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

using namespace pac;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
    void expect(bool cond, const std::string& why)
    {
        if (!cond)
            fail(why);
    }
};

std::string data(const std::string& name)
{
    return std::string(PAC_TEST_DATA) + "/" + name;
}

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* kEffect = "pos < 0.6 && halt";
const char* kPreds = "vel >= 0.03; pos >= 0.6; pos >= 0.4; pos >= 0.3";

// Varied small generator settings, indexed by seed.
GenSpec small_spec(std::uint64_t seed, std::size_t budget)
{
    GenSpec g;
    g.seed = seed;
    g.budget = budget;
    g.kmin = 1;
    g.kmax = 1 + static_cast<int>(seed % 4);
    g.max_depth = 3 + static_cast<int>(seed % 6);
    g.noise = 1 + static_cast<int>(seed % 2);
    g.extra_vars = static_cast<int>(seed % 3 == 0);
    return g;
}

// Models where the effect label never occurs are skipped.
bool has_effect(const Dtmc& m, const Predicate& e)
{
    try {
        return !satisfying_set(e, m).empty();
    } catch (const UnboundVariable&) {
        return false;
    }
}

// ---------------------------------------------------------------------------

Outcome golden_concrete()
{
    Outcome o;
    auto t0 = Clock::now();
    Dtmc m = load_model(data("vehicle.dtmc"));
    PacQuery q;
    q.model = &m;
    q.effect = parse_predicate(kEffect);
    auto r = discover(q);
    double ms = ms_since(t0);
    o.expect(r.has_value(), "no cause");
    if (!r)
        return o;
    o.expect(r->cause == StateSet{m.find("s1")}, "cause is " + describe(m, r->cause));
    o.expect(r->p_aw == Rational(69, 200), "p_AW = " + to_string(r->p_aw));
    o.expect(r->p_cw == Rational(3, 20), "p_CW = " + to_string(r->p_cw));
    o.expect(ms < 1000, "took " + std::to_string(ms) + " ms");
    if (o.pass)
        o.detail = "{s1}, 69/200 > 3/20 in " + std::to_string(ms) + " ms";
    return o;
}

Outcome golden_abstract()
{
    Outcome o;
    auto t0 = Clock::now();
    Dtmc m = load_model(data("vehicle.dtmc"));
    AbstractPacQuery q;
    q.model = &m;
    q.effect = parse_predicate(kEffect);
    Abstraction a = abstract(m, parse_predicate_list(kPreds));

    auto refuted = [&](const char* name, Rational aw, Rational cw) {
        auto r = check_cause_abs(a, q, {a.find(name)});
        o.expect(!r.confirmed, std::string(name) + " confirmed");
        if (r.verdicts.size() != 1)
            return o.fail("expected one root verdict");
        o.expect(r.verdicts[0].p_aw == aw && r.verdicts[0].p_cw == cw,
                 std::string(name) + ": " + to_string(r.verdicts[0].p_aw) + " vs " + to_string(r.verdicts[0].p_cw));
    };
    refuted("ŝ_1", Rational(1, 10), Rational(3, 20));
    refuted("ŝ_11", Rational(3, 20), Rational(9, 20));
    o.expect(!discover_abs(a, q).report, "coarse abstraction yields a cause");

    StateSet Ehat = a.lift(satisfying_set(q.effect, m));
    StateId sel = select_split_state(a, Ehat);
    o.expect(sel == a.find("ŝ_1"), "split selects " + a.state(sel).name);
    auto iv = min_max_eventually(a.mdp(), Ehat)[static_cast<std::size_t>(sel)];
    o.expect(iv.lo == Rational(1, 5) && iv.hi == Rational(9, 10),
             "interval [" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]");

    Abstraction b = refine_split(a, sel, Rational(3, 5), prob_eventually(m, satisfying_set(q.effect, m)));
    auto r = check_cause_abs(b, q, {b.find("ŝ_1,1")});
    o.expect(r.confirmed, "ŝ_1,1 refuted");
    if (!r.verdicts.empty())
        o.expect(r.verdicts[0].p_aw == Rational(69, 200) && r.verdicts[0].p_cw == Rational(3, 20),
                 "ŝ_1,1: " + to_string(r.verdicts[0].p_aw) + " vs " + to_string(r.verdicts[0].p_cw));
    double ms = ms_since(t0);
    o.expect(ms < 1000, "took " + std::to_string(ms) + " ms");
    if (o.pass)
        o.detail = "ŝ_1 1/10 vs 3/20, ŝ_11 3/20 vs 9/20 refuted; split ŝ_1 [1/5, 9/10]; ŝ_1,1 69/200 > 3/20 in "
                   + std::to_string(ms) + " ms";
    return o;
}

Outcome soundness()
{
    Outcome o;
    int models = 0, causes = 0;
    Predicate effect = parse_predicate("fail");
    for (std::uint64_t seed = 1; models < 240 && seed < 5000; ++seed) {
        Dtmc m = generate(small_spec(seed, 40));
        if (!has_effect(m, effect))
            continue;
        ++models;
        AbstractPacQuery q;
        q.model = &m;
        q.effect = effect;
        if (seed % 3 == 0)
            q.contingencies = parse_predicate_list("act >= 0");
        if (seed % 5 == 0) {
            q.candidates = CandidatePolicy::Subsets;
            q.max_subset = 2;
        }
        RefineOptions opt;
        opt.predicates = parse_predicate_list("pos >= 0; vel >= 0; fail");
        opt.max_rounds = 200;
        RefineResult r = run(q, opt);
        if (!r.report)
            continue;
        ++causes;
        PacQuery cq;
        cq.model = &m;
        cq.effect = effect;
        cq.contingencies = q.contingencies;
        cq.candidates = q.candidates;
        cq.max_subset = q.max_subset;
        CheckResult c = check_cause(cq, r.report->cause);
        o.expect(c.confirmed, "seed " + std::to_string(seed) + ": " + describe(m, r.report->cause) + " refuted");
        if (c.confirmed)
            o.expect(c.report->p_aw > c.report->p_cw && c.report->p_aw > 0,
                     "seed " + std::to_string(seed) + ": margin");
    }
    o.expect(models >= 200, "only " + std::to_string(models) + " models");
    o.expect(causes > 0, "no causes found at all");
    if (o.pass)
        o.detail = std::to_string(causes) + " causes over " + std::to_string(models) + " models all re-confirmed";
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    int models = 0, causes = 0, rejected = 0;
    Predicate effect = parse_predicate("fail");
    for (std::uint64_t seed = 1; models < 520 && seed < 10000; ++seed) {
        Dtmc m = generate(small_spec(seed, 15));
        if (!has_effect(m, effect))
            continue;
        ++models;
        PacQuery q;
        q.model = &m;
        q.effect = effect;
        if (seed % 3 == 1)
            q.contingencies = parse_predicate_list("vel >= 0");
        if (seed % 4 == 2) {
            q.candidates = CandidatePolicy::Subsets;
            q.max_subset = 2;
        }
        if (seed % 7 == 3)
            q.roots = RootPolicy::AllStates;
        std::optional<CauseReport> a, b;
        std::string err_a, err_b;
        try {
            a = discover(q);
        } catch (const std::exception& e) {
            err_a = e.what();
        }
        try {
            b = oracle_discover(q);
        } catch (const std::exception& e) {
            err_b = e.what();
        }
        std::string tag = "seed " + std::to_string(seed) + ": ";
        if (!err_a.empty() || !err_b.empty()) {
            o.expect(!err_a.empty() && !err_b.empty(), tag + "only one side failed (" + err_a + err_b + ")");
            ++rejected;
            continue;
        }
        o.expect(a.has_value() == b.has_value(), tag + "verdicts differ");
        if (!a || !b)
            continue;
        ++causes;
        o.expect(a->cause == b->cause, tag + describe(m, a->cause) + " vs " + describe(m, b->cause));
        o.expect(a->root == b->root, tag + "roots differ");
        o.expect(a->p_aw == b->p_aw, tag + "p_AW " + to_string(a->p_aw) + " vs " + to_string(b->p_aw));
        o.expect(a->p_cw == b->p_cw, tag + "p_CW " + to_string(a->p_cw) + " vs " + to_string(b->p_cw));
    }
    o.expect(models >= 500, "only " + std::to_string(models) + " models");
    if (o.pass)
        o.detail = std::to_string(models) + " models agree (" + std::to_string(causes) + " with a cause, "
                   + std::to_string(rejected) + " rejected by both)";
    return o;
}

Outcome subgraphs()
{
    Outcome o;
    Dtmc m = load_model(data("wtrace.dtmc"));
    auto W = parse_predicate_list("w");
    auto subs = enumerate_subgraphs(m, W);
    std::multiset<std::string> got;
    for (const auto& g : subs)
        got.insert(signature_string(g.signature, W));
    std::multiset<std::string> want{"(w,¬w)", "(w)", "(w,¬w,w,¬w)", "(w,¬w,w)"};
    o.expect(subs.size() == 4, std::to_string(subs.size()) + " subgraphs");
    o.expect(got == want, "signatures differ");
    if (o.pass)
        o.detail = "(w,¬w), (w), (w,¬w,w,¬w), (w,¬w,w)";
    return o;
}

Outcome sandwich()
{
    Outcome o;
    int models = 0;
    std::size_t checked = 0;
    Predicate effect = parse_predicate("fail");
    const char* pred_sets[] = {"pos >= 0; vel >= 0", "vel >= 0.01; pos >= 0.02", "act >= 0; pos >= -0.01",
                               "pos >= 0"};
    for (std::uint64_t seed = 1; models < 220 && seed < 5000; ++seed) {
        Dtmc m = generate(small_spec(seed, 40));
        if (!has_effect(m, effect))
            continue;
        StateSet E = satisfying_set(effect, m);
        ++models;
        auto preds = parse_predicate_list(pred_sets[seed % 4]);
        preds.push_back(effect);
        Abstraction a = abstract(m, preds);
        Profile ev = prob_eventually(m, E);
        // a few refinement steps as well as the initial partition
        for (int step = 0; step < 3; ++step) {
            StateSet Ehat = a.lift(E);
            auto iv = min_max_eventually(a.mdp(), Ehat);
            for (std::size_t s = 0; s < m.size(); ++s) {
                if (m.depth(static_cast<StateId>(s)) < 0)
                    continue;
                const auto& box = iv[static_cast<std::size_t>(a.of(static_cast<StateId>(s)))];
                ++checked;
                o.expect(box.lo <= ev[s] && ev[s] <= box.hi,
                         "seed " + std::to_string(seed) + ": " + m.state(static_cast<StateId>(s)).name + " "
                             + to_string(ev[s]) + " outside [" + to_string(box.lo) + ", " + to_string(box.hi) + "]");
            }
            if (a.finest())
                break;
            a = refine_split(a, select_split_state(a, Ehat), Rational(1, 2), ev);
        }
    }
    o.expect(models >= 200, "only " + std::to_string(models) + " models");
    if (o.pass)
        o.detail = std::to_string(checked) + " state checks over " + std::to_string(models) + " models";
    return o;
}

Outcome performance()
{
    Outcome o;
    std::vector<GenSpec> specs;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        GenSpec g;
        g.seed = seed;
        g.budget = 2000;
        g.max_depth = 20;
        specs.push_back(g);
    }
    BenchTemplate t;
    t.timeout_ms = 60000;
    BenchReport rep = compare(specs, t);
    for (const auto& row : rep.rows) {
        o.expect(row.states >= 2000, row.name + " has " + std::to_string(row.states) + " states");
        bool conc_done = row.concrete_status == "cause" || row.concrete_status == "none";
        bool abs_done = row.abstract_status == "cause" || row.abstract_status == "none";
        o.expect(conc_done && abs_done, row.name + ": " + row.concrete_status + " / " + row.abstract_status);
        o.expect(row.agree, row.name + ": pipelines disagree");
        o.expect(row.improvement.has_value(), row.name + ": no improvement value");
    }
    std::string table = render_report(rep, false, true);
    o.expect(table.find("improvement") != std::string::npos, "no improvement column");
    std::cout << table;
    if (o.pass)
        o.detail = std::to_string(rep.rows.size()) + " models of 2000 states, all agree";
    return o;
}

std::string run_cli(const std::string& args)
{
    std::string cmd = std::string(PAC_CLI) + " " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe.get()))
        out.append(buf.data(), n);
    return out;
}

Outcome determinism()
{
    Outcome o;
    std::string tmp = PAC_TEST_TMP;
    std::ofstream(tmp + "/unsat.out") << "unsat\n";
    std::ofstream(tmp + "/query.txt") << "effect = pos < 0.6 && halt\npreds = " << kPreds << "\n";
    std::ofstream(tmp + "/gen.cfg") << "budget = 120\nmax_depth = 8\nkmax = 3\n";
    const std::string vehicle = data("vehicle.dtmc");
    const std::string e = " -e 'pos < 0.6 && halt'";
    const std::string p = std::string(" --preds '") + kPreds + "'";
    const std::vector<std::string> invocations = {
        "validate -m " + vehicle,
        "check -m " + vehicle + e + " --cause s1",
        "discover -m " + vehicle + e,
        "discover -m " + vehicle + e + " --candidates subsets --format records",
        "abs-discover -m " + vehicle + e + p,
        "refine -m " + vehicle + e + p,
        "refine -m " + vehicle + " --query " + tmp + "/query.txt --format records",
        "refine -m " + data("wtrace.dtmc") + " -e 'x = 7' --w w --w-strategy subgraphs --preds 'x >= 5'",
        "subgraphs -m " + data("wtrace.dtmc") + " --w w",
        "export-smt -m " + vehicle + e,
        "export-smt-abs -m " + vehicle + e + p + " --split ŝ_1",
        "decode-smt -m " + vehicle + e + " --solver-output " + tmp + "/unsat.out",
        "gen --seed 11 --spec " + tmp + "/gen.cfg",
        "bench --seed 4 --cases 2 --budget 150 --max-depth 10",
    };
    for (const auto& args : invocations) {
        std::set<std::size_t> hashes;
        std::size_t len = 0;
        for (int i = 0; i < 3; ++i) {
            std::string out = run_cli(args);
            len = out.size();
            hashes.insert(std::hash<std::string>{}(out));
        }
        o.expect(len > 0, "no output from: " + args);
        o.expect(hashes.size() == 1, "output differs across runs: " + args);
    }
    if (o.pass)
        o.detail = std::to_string(invocations.size()) + " invocations byte-identical across 3 runs";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 concrete golden run", golden_concrete},
        {"2 abstraction golden run", golden_abstract},
        {"3 refinement soundness", soundness},
        {"4 oracle equivalence", oracle_equivalence},
        {"5 subgraph decomposition", subgraphs},
        {"6 abstraction sandwich", sandwich},
        {"7 benchmark at scale", performance},
        {"8 deterministic output", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2fs", ms_since(t0) / 1000.0);
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " (" << secs << ")" << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
