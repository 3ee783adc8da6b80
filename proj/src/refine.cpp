#include "pac/refine.hpp"

#include "pac/errors.hpp"
#include "pac/subgraph.hpp"

#include "json.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace pac {

StateId select_split_state(const Abstraction& a, const StateSet& Ehat)
{
    auto iv = min_max_eventually(a.mdp(), Ehat);
    StateId best = -1;
    Rational width;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a.state(static_cast<StateId>(s)).members.size() < 2)
            continue;
        Rational w = iv[s].hi - iv[s].lo;
        if (best < 0 || w > width) {
            best = static_cast<StateId>(s);
            width = w;
        }
    }
    if (best < 0)
        throw QueryError("finest partition reached");
    return best;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Refinement loop on one chain; the report refers to that chain's ids.
std::optional<CauseReport> refine_one(const Dtmc& m, const AbstractPacQuery& q, const RefineOptions& opt,
                                      int subgraph, std::vector<TraceRecord>& trace)
{
    bool keep_w = !q.contingencies.empty() && q.strategy == WStrategy::WPreserving;
    Abstraction a = abstract(m, opt.predicates, keep_w ? AbsMode::WPreserving : AbsMode::Plain,
                             keep_w ? q.contingencies : std::vector<Predicate>{});
    AbstractPacQuery local = q;
    local.model = &m;
    if (subgraph >= 0)
        local.strategy = WStrategy::Subgraphs;
    StateSet E = satisfying_set(q.effect, m);
    if (E.empty())
        return std::nullopt;
    Profile ev = prob_eventually(m, E);

    for (int round = 1; round <= opt.max_rounds; ++round) {
        if (q.deadline)
            q.deadline->check();
        auto t0 = Clock::now();
        TraceRecord rec;
        rec.round = round;
        rec.subgraph = subgraph;
        rec.states = a.size();
        AbsDiscovery found = discover_abs(a, local);
        if (found.report) {
            found.report->round = round;
            if (!check_cause(concrete_query(a, local), found.report->cause).confirmed)
                throw std::logic_error("refinement returned a cause the concrete check rejects");
            rec.outcome = "cause";
            rec.millis = since(t0);
            trace.push_back(rec);
            return found.report;
        }
        rec.outcome = found.spurious.empty() ? "none" : "spurious";
        if (round == opt.max_rounds || a.finest()) {
            if (a.finest())
                rec.outcome = "exhausted";
            rec.millis = since(t0);
            trace.push_back(rec);
            break;
        }
        StateId sel = select_split_state(a, found.effect);
        auto iv = min_max_eventually(a.mdp(), found.effect);
        rec.selected = a.state(sel).name;
        rec.lo = iv[static_cast<std::size_t>(sel)].lo;
        rec.hi = iv[static_cast<std::size_t>(sel)].hi;
        a = refine_split(a, sel, opt.alpha, ev);
        rec.millis = since(t0);
        trace.push_back(rec);
    }
    return std::nullopt;
}

} // namespace

RefineResult run(const AbstractPacQuery& q, const RefineOptions& opt)
{
    if (q.model == nullptr)
        throw QueryError("query has no model");
    if (opt.max_rounds < 1)
        throw QueryError("max rounds must be at least 1");
    RefineResult out;
    if (q.contingencies.empty() || q.strategy == WStrategy::WPreserving) {
        out.report = refine_one(*q.model, q, opt, -1, out.trace);
        return out;
    }
    auto subs = enumerate_subgraphs(*q.model, q.contingencies, opt.path_cap);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const auto& sg = subs[i];
        auto r = refine_one(sg.model, q, opt, static_cast<int>(i), out.trace);
        if (!r)
            continue;
        StateSet cause;
        for (StateId s : r->cause)
            cause.push_back(sg.origin[static_cast<std::size_t>(s)]);
        std::sort(cause.begin(), cause.end());
        cause.erase(std::unique(cause.begin(), cause.end()), cause.end());
        r->cause = cause;
        r->cause_predicate = cause_predicate(*q.model, cause);
        r->root = sg.origin[static_cast<std::size_t>(r->root)];
        r->cf_root = sg.origin[static_cast<std::size_t>(r->cf_root)];
        out.report = std::move(r);
        return out;
    }
    return out;
}

std::string render_trace(const std::vector<TraceRecord>& trace, bool records, bool timing)
{
    std::ostringstream out;
    for (const auto& r : trace) {
        if (records) {
            nlohmann::ordered_json j;
            j["round"] = r.round;
            if (r.subgraph >= 0)
                j["subgraph"] = r.subgraph;
            j["states"] = r.states;
            j["split"] = r.selected;
            j["lo"] = r.selected.empty() ? "" : to_string(r.lo);
            j["hi"] = r.selected.empty() ? "" : to_string(r.hi);
            j["outcome"] = r.outcome;
            if (timing)
                j["millis"] = r.millis;
            out << j.dump() << '\n';
        } else {
            out << "round " << r.round;
            if (r.subgraph >= 0)
                out << " subgraph " << r.subgraph;
            out << ": " << r.states << " abstract states, " << r.outcome;
            if (!r.selected.empty())
                out << ", split " << r.selected << " [" << to_string(r.lo) << ", " << to_string(r.hi) << "]";
            if (timing) {
                std::ostringstream ms;
                ms.setf(std::ios::fixed);
                ms.precision(3);
                ms << r.millis;
                out << " (" << ms.str() << " ms)";
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace pac
