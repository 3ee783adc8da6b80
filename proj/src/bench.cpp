#include "pac/bench.hpp"

#include "pac/errors.hpp"
#include "pac/parallel.hpp"
#include "pac/stutter.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <deque>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace pac {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

long parse_int(const std::string& v, int line)
{
    try {
        std::size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw SyntaxError("expected an integer, got '" + v + "'", line, 1);
    }
}

} // namespace

GenSpec parse_genspec(std::string_view text)
{
    GenSpec g;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SyntaxError("expected key=value", lineno, 1);
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string val = trim(std::string_view(line).substr(eq + 1));
        try {
            if (key == "seed")
                g.seed = static_cast<std::uint64_t>(parse_int(val, lineno));
            else if (key == "budget")
                g.budget = static_cast<std::size_t>(parse_int(val, lineno));
            else if (key == "max_depth")
                g.max_depth = static_cast<int>(parse_int(val, lineno));
            else if (key == "kmin")
                g.kmin = static_cast<int>(parse_int(val, lineno));
            else if (key == "kmax")
                g.kmax = static_cast<int>(parse_int(val, lineno));
            else if (key == "extra_vars")
                g.extra_vars = static_cast<int>(parse_int(val, lineno));
            else if (key == "step")
                g.step = parse_rational(val);
            else if (key == "noise")
                g.noise = static_cast<int>(parse_int(val, lineno));
            else if (key == "accel")
                g.accel = parse_rational(val);
            else if (key == "effect_rule")
                g.effect_rule = parse_predicate(val);
            else if (key == "effect_label")
                g.effect_label = val;
            else if (key == "strict")
                g.strict = val == "1" || val == "true";
            else
                throw SyntaxError("unknown key '" + key + "'", lineno, 1);
        } catch (const std::invalid_argument& e) {
            throw SyntaxError(e.what(), lineno, static_cast<int>(eq) + 2);
        } catch (const SyntaxError& e) {
            if (e.line() == lineno)
                throw;
            throw SyntaxError(e.what(), lineno, static_cast<int>(eq) + 1 + e.column());
        }
    }
    return g;
}

Dtmc generate(const GenSpec& spec)
{
    if (spec.kmin < 1 || spec.kmax < spec.kmin)
        throw QueryError("branching range must satisfy 1 <= kmin <= kmax");
    if (spec.budget < 1 || spec.max_depth < 0)
        throw QueryError("budget must be positive and depth non-negative");

    std::vector<std::string> vars{"pos", "vel", "act"};
    for (int i = 1; i <= spec.extra_vars; ++i)
        vars.push_back("x" + std::to_string(i));
    DtmcBuilder b(vars);
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };

    auto name = [](std::size_t i) { return "s" + std::to_string(i); };
    std::vector<StateId> layer{b.add_state(name(0), std::vector<Rational>(vars.size(), Rational(0)))};

    for (int depth = 0; depth < spec.max_depth && !layer.empty(); ++depth) {
        std::map<std::vector<Rational>, StateId> next_index;
        std::vector<StateId> next;
        for (StateId s : layer) {
            const std::vector<Rational> val = b.state(s).values;
            int k = static_cast<int>(uniform(spec.kmin, spec.kmax));
            std::vector<std::vector<Rational>> kids;
            std::vector<long> weights;
            for (int i = 0; i < k; ++i) {
                std::vector<Rational> v = val;
                long act = uniform(-1, 1);
                long noise = uniform(-spec.noise, spec.noise);
                v[0] = val[0] + val[1];
                v[1] = val[1] + spec.accel * act + spec.step * noise;
                v[2] = act;
                for (std::size_t x = 3; x < v.size(); ++x)
                    v[x] = val[x] + spec.step * uniform(-1, 1);
                kids.push_back(std::move(v));
                weights.push_back(uniform(1, 1000));
            }
            std::size_t fresh = 0;
            {
                std::set<std::vector<Rational>> seen;
                for (const auto& v : kids)
                    if (!next_index.count(v) && seen.insert(v).second)
                        ++fresh;
            }
            if (b.size() + fresh > spec.budget) {
                if (spec.strict)
                    throw GuardExceeded("state budget of " + std::to_string(spec.budget) + " exceeded");
                continue; // s stays a leaf
            }
            long total = 0;
            for (long w : weights)
                total += w;
            std::map<StateId, long> agg;
            for (std::size_t i = 0; i < kids.size(); ++i) {
                auto it = next_index.find(kids[i]);
                if (it == next_index.end()) {
                    StateId t = b.add_state(name(b.size()), kids[i]);
                    it = next_index.emplace(kids[i], t).first;
                    next.push_back(t);
                }
                agg[it->second] += weights[i];
            }
            for (const auto& [t, w] : agg) {
                Rational p(w, total);
                p.canonicalize();
                b.add_edge(s, t, p);
            }
        }
        layer = std::move(next);
    }
    b.close_leaves();

    std::set<std::string> props{kHalt, spec.effect_label};
    auto rule = spec.effect_rule.compile(Scope{vars, &props});
    for (std::size_t s = 0; s < b.size(); ++s) {
        State& st = b.state(static_cast<StateId>(s));
        if (rule.eval(st.values, st.labels))
            st.labels.insert(spec.effect_label);
    }
    return b.build();
}

// ---------------------------------------------------------------------------

namespace {

struct WeightedPath {
    std::vector<StateId> states;
    Rational prob;
};

class PathOracle {
public:
    PathOracle(const Dtmc& m, std::size_t cap) : m_(m), cap_(cap) {}

    const std::vector<WeightedPath>& from(StateId s)
    {
        auto it = cache_.find(s);
        if (it != cache_.end())
            return it->second;
        std::vector<WeightedPath> out;
        WeightedPath cur{{s}, Rational(1)};
        std::function<void()> go = [&] {
            StateId u = cur.states.back();
            if (m_.absorbing(u) || m_.successors(u).empty()) {
                if (++count_ > cap_)
                    throw GuardExceeded("more than " + std::to_string(cap_) + " paths");
                out.push_back(cur);
                return;
            }
            for (const auto& t : m_.successors(u)) {
                Rational saved = cur.prob;
                cur.prob *= t.prob;
                cur.states.push_back(t.target);
                go();
                cur.states.pop_back();
                cur.prob = saved;
            }
        };
        go();
        return cache_.emplace(s, std::move(out)).first->second;
    }

private:
    const Dtmc& m_;
    std::size_t cap_;
    std::size_t count_ = 0;
    std::map<StateId, std::vector<WeightedPath>> cache_;
};

// Stutter inequalities evaluated straight from their definitions.
class DirectSe {
public:
    DirectSe(const Dtmc& m, const std::vector<Predicate>& W) : m_(m)
    {
        std::vector<CompiledPredicate> c;
        for (const auto& w : W)
            c.push_back(w.compile(m.scope()));
        for (const auto& st : m.states()) {
            std::vector<bool> v;
            for (const auto& p : c)
                v.push_back(p.eval(st.values, st.labels));
            val_.push_back(v);
        }
    }

    bool holds(StateId s, StateId t) const { return side(s, t) && side(t, s); }

private:
    bool eq(StateId a, StateId b) const { return val_[static_cast<std::size_t>(a)] == val_[static_cast<std::size_t>(b)]; }

    Rational st(StateId a) const
    {
        Rational r = 0;
        for (const auto& x : m_.successors(a))
            if (eq(a, x.target))
                r += x.prob;
        return r;
    }

    Rational neq(StateId a, StateId b) const
    {
        Rational r = 0;
        for (const auto& x : m_.successors(a))
            for (const auto& y : m_.successors(b))
                if (eq(x.target, y.target))
                    r += x.prob * y.prob;
        return r;
    }

    Rational stueq(StateId partner, StateId t) const
    {
        if (eq(partner, t))
            return 1;
        Rational s = st(t);
        if (s == 0 || m_.absorbing(t))
            return 0;
        Rational acc = 0;
        for (const auto& x : m_.successors(t))
            acc += x.prob * stueq(partner, x.target);
        return s * acc;
    }

    bool side(StateId a, StateId b) const
    {
        Rational lhs = eq(a, b) ? 1 : 0;
        return lhs <= neq(a, b) + st(a) + stueq(a, b);
    }

    const Dtmc& m_;
    std::vector<std::vector<bool>> val_;
};

bool contains(const StateSet& s, StateId x)
{
    return std::binary_search(s.begin(), s.end(), x);
}

} // namespace

std::optional<CauseReport> oracle_discover(const PacQuery& q, std::size_t path_cap)
{
    if (q.candidates == CandidatePolicy::PredicateTemplate)
        throw QueryError("the oracle does not support predicate templates");
    const Dtmc& m = *q.model;
    StateSet E = satisfying_set(q.effect, m);
    if (E.empty())
        throw QueryError("effect predicate holds in no state");
    StateSet roots = resolve_roots(m, q.roots, q.explicit_roots);
    PathOracle paths(m, path_cap);

    auto reaches_e = [&](const WeightedPath& p) {
        return std::any_of(p.states.begin(), p.states.end(), [&](StateId s) { return contains(E, s); });
    };

    // independent BFS depth
    std::vector<int> depth(m.size(), -1);
    std::deque<StateId> queue;
    for (StateId r : m.initial()) {
        depth[static_cast<std::size_t>(r)] = 0;
        queue.push_back(r);
    }
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (const auto& t : m.successors(s)) {
            if (depth[static_cast<std::size_t>(t.target)] < 0) {
                depth[static_cast<std::size_t>(t.target)] = depth[static_cast<std::size_t>(s)] + 1;
                queue.push_back(t.target);
            }
        }
    }

    std::vector<StateId> pool;
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        if (contains(E, sid) || contains(roots, sid))
            continue;
        Rational ev = 0;
        for (const auto& p : paths.from(sid))
            if (reaches_e(p))
                ev += p.prob;
        if (ev > 0)
            pool.push_back(sid);
    }
    std::stable_sort(pool.begin(), pool.end(), [&](StateId a, StateId b) {
        int da = depth[static_cast<std::size_t>(a)] < 0 ? INT_MAX : depth[static_cast<std::size_t>(a)];
        int db = depth[static_cast<std::size_t>(b)] < 0 ? INT_MAX : depth[static_cast<std::size_t>(b)];
        return da != db ? da < db : a < b;
    });

    std::vector<StateSet> candidates;
    std::size_t kmax = q.candidates == CandidatePolicy::SingleState ? 1 : static_cast<std::size_t>(std::max(1, q.max_subset));
    std::function<void(std::size_t, std::size_t, StateSet&)> choose = [&](std::size_t k, std::size_t from, StateSet& cur) {
        if (cur.size() == k) {
            StateSet c = cur;
            std::sort(c.begin(), c.end());
            candidates.push_back(c);
            return;
        }
        for (std::size_t i = from; i < pool.size(); ++i) {
            cur.push_back(pool[i]);
            choose(k, i + 1, cur);
            cur.pop_back();
        }
    };
    for (std::size_t k = 1; k <= kmax; ++k) {
        StateSet cur;
        choose(k, 0, cur);
    }

    DirectSe se(m, q.contingencies);
    for (const auto& C : candidates) {
        auto via = [&](StateId root) {
            Rational acc = 0;
            for (const auto& p : paths.from(root)) {
                for (std::size_t i = 0; i < p.states.size(); ++i) {
                    if (contains(C, p.states[i])) {
                        if (std::any_of(p.states.begin() + static_cast<long>(i), p.states.end(),
                                        [&](StateId s) { return contains(E, s); }))
                            acc += p.prob;
                        break;
                    }
                    if (contains(E, p.states[i]))
                        break;
                }
            }
            return acc;
        };
        auto cf = [&](StateId root) {
            Rational acc = 0;
            for (const auto& p : paths.from(root)) {
                for (StateId s : p.states) {
                    if (contains(E, s)) {
                        acc += p.prob;
                        break;
                    }
                    if (contains(C, s))
                        break;
                }
            }
            return acc;
        };
        for (StateId root : roots) {
            Rational aw = via(root);
            if (aw <= 0)
                continue;
            StateId worst = -1;
            Rational worst_cw;
            for (StateId other : roots) {
                if (!se.holds(root, other))
                    continue;
                Rational c = cf(other);
                if (worst < 0 || c > worst_cw) {
                    worst = other;
                    worst_cw = c;
                }
            }
            if (worst >= 0 && !(aw > worst_cw))
                continue;
            CauseReport r;
            r.cause = C;
            r.cause_predicate = cause_predicate(m, C);
            r.root = root;
            r.p_aw = aw;
            r.cf_root = worst;
            r.p_cw = worst_cw;
            r.pc1 = true;
            return r;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

BenchRow run_case(const std::string& name, const Dtmc& m, const BenchTemplate& tmpl)
{
    BenchRow row;
    row.name = name;
    row.states = m.size();
    Predicate effect = parse_predicate(tmpl.effect);

    {
        Deadline dl(std::chrono::milliseconds(tmpl.timeout_ms));
        PacQuery q;
        q.model = &m;
        q.effect = effect;
        q.deadline = &dl;
        auto t0 = Clock::now();
        try {
            auto r = discover(q);
            row.concrete_status = r ? "cause" : "none";
            if (r)
                row.concrete_cause = describe(m, r->cause);
        } catch (const TimedOut&) {
            row.concrete_status = "timeout";
        } catch (const std::exception&) {
            row.concrete_status = "error";
        }
        row.concrete_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    {
        Deadline dl(std::chrono::milliseconds(tmpl.timeout_ms));
        AbstractPacQuery q;
        q.model = &m;
        q.effect = effect;
        q.deadline = &dl;
        RefineOptions opt;
        for (const auto& p : tmpl.predicates)
            opt.predicates.push_back(parse_predicate(p));
        if (tmpl.include_effect)
            opt.predicates.push_back(effect);
        opt.alpha = tmpl.alpha;
        opt.max_rounds = tmpl.max_rounds;
        auto t0 = Clock::now();
        try {
            auto r = run(q, opt);
            row.abstract_status = r.report ? "cause" : "none";
            row.rounds = static_cast<int>(r.trace.size());
            if (r.report) {
                std::string names;
                for (const auto& n : r.report->abstract_cause)
                    names += (names.empty() ? "" : ",") + n;
                row.abstract_cause = "{" + names + "}";
            }
        } catch (const TimedOut&) {
            row.abstract_status = "timeout";
        } catch (const std::exception&) {
            row.abstract_status = "error";
        }
        row.abstract_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    auto done = [](const std::string& s) { return s == "cause" || s == "none"; };
    row.agree = done(row.concrete_status) && done(row.abstract_status)
                && (row.concrete_status == "cause") == (row.abstract_status == "cause");
    if (done(row.concrete_status) && done(row.abstract_status) && row.concrete_ms > 0)
        row.improvement = 100.0 * (1.0 - row.abstract_ms / row.concrete_ms);
    return row;
}

} // namespace

BenchRow compare_model(const std::string& name, const Dtmc& m, const BenchTemplate& tmpl)
{
    return run_case(name, m, tmpl);
}

BenchReport compare(const std::vector<GenSpec>& specs, const BenchTemplate& tmpl)
{
    BenchReport report;
    report.rows.resize(specs.size());
    if (specs.empty())
        return report;
    {
        // warm-up on the first case, discarded
        Dtmc m = generate(specs.front());
        (void)run_case("warmup", m, tmpl);
    }
    parallel_for(specs.size(), tmpl.jobs, [&](std::size_t i) {
        Dtmc m = generate(specs[i]);
        report.rows[i] = run_case("seed=" + std::to_string(specs[i].seed), m, tmpl);
    });
    return report;
}

std::string render_report(const BenchReport& r, bool records, bool timing)
{
    std::ostringstream out;
    auto ms = [&](double v) {
        if (!timing)
            return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(1) << v;
        return s.str();
    };
    auto improvement = [&](const BenchRow& row) {
        if (!row.improvement)
            return std::string("n/a");
        if (!timing)
            return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << *row.improvement << "%";
        return s.str();
    };
    if (records) {
        for (const auto& row : r.rows) {
            nlohmann::ordered_json j;
            j["case"] = row.name;
            j["states"] = row.states;
            if (timing) {
                j["concrete_ms"] = row.concrete_ms;
                j["abstract_ms"] = row.abstract_ms;
                if (row.improvement)
                    j["improvement"] = *row.improvement;
                else
                    j["improvement"] = nullptr;
            }
            j["concrete"] = row.concrete_status;
            j["abstract"] = row.abstract_status;
            j["concrete_cause"] = row.concrete_cause;
            j["abstract_cause"] = row.abstract_cause;
            j["rounds"] = row.rounds;
            j["agree"] = row.agree;
            out << j.dump() << '\n';
        }
        return out.str();
    }
    out << std::left << std::setw(14) << "case" << std::right << std::setw(7) << "|M|" << std::setw(14)
        << "concrete ms" << std::setw(14) << "abstract ms" << std::setw(13) << "improvement" << std::setw(8)
        << "rounds" << "  " << std::left << std::setw(9) << "concrete" << std::setw(9) << "abstract" << "agree\n";
    for (const auto& row : r.rows) {
        out << std::left << std::setw(14) << row.name << std::right << std::setw(7) << row.states << std::setw(14)
            << ms(row.concrete_ms) << std::setw(14) << ms(row.abstract_ms) << std::setw(13) << improvement(row)
            << std::setw(8) << row.rounds << "  " << std::left << std::setw(9) << row.concrete_status
            << std::setw(9) << row.abstract_status << (row.agree ? "yes" : "NO") << '\n';
    }
    return out.str();
}

} // namespace pac
