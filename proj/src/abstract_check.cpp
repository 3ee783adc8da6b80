#include "pac/abstract_check.hpp"

#include "pac/errors.hpp"
#include "pac/parallel.hpp"
#include "pac/stutter.hpp"

#include <algorithm>
#include <climits>
#include <memory>

namespace pac {

namespace {

struct Context {
    StateSet E;      // concrete effect
    StateSet Ehat;   // abstract effect
    StateSet roots;  // abstract roots
    StateSet concrete_roots;
    RankedValues ev_min;
    std::unique_ptr<AbstractStutterSystem> se; // null when SE is trivial
};

Context make_context(const Abstraction& a, const AbstractPacQuery& q)
{
    const Dtmc& m = a.concrete();
    Context c;
    c.E = satisfying_set(q.effect, m);
    if (c.E.empty())
        throw QueryError("effect predicate '" + q.effect.to_string() + "' holds in no state");
    c.Ehat = a.lift(c.E);
    c.concrete_roots = resolve_roots(m, q.roots, q.explicit_roots);
    if (q.roots == RootPolicy::InitialOnly)
        c.roots = a.mdp().initial();
    else if (q.roots == RootPolicy::AllStates)
        for (std::size_t s = 0; s < a.size(); ++s)
            c.roots.push_back(static_cast<StateId>(s));
    else
        c.roots = a.lift(c.concrete_roots);
    if (c.roots.empty())
        throw QueryError("root set is empty");
    c.ev_min = eventually_ranked(a.mdp(), c.Ehat, Opt::Min);
    if (!q.contingencies.empty() && q.strategy == WStrategy::WPreserving) {
        if (a.mode() != AbsMode::WPreserving)
            throw QueryError("W-preserving strategy needs a W-preserving abstraction");
        auto w = w_valuations(m, q.contingencies);
        std::vector<WValuation> abs_w;
        for (const auto& s : a.states())
            abs_w.push_back(w[static_cast<std::size_t>(s.members.front())]);
        c.se = std::make_unique<AbstractStutterSystem>(a.mdp(), std::move(abs_w));
    }
    return c;
}

AbsCheckResult check_with(const Abstraction& a, const Context& ctx, const StateSet& cause_in)
{
    const Mdp& mdp = a.mdp();
    StateSet cause = cause_in;
    std::sort(cause.begin(), cause.end());
    cause.erase(std::unique(cause.begin(), cause.end()), cause.end());
    if (cause.empty())
        throw QueryError("cause set is empty");
    if (std::includes(ctx.roots.begin(), ctx.roots.end(), cause.begin(), cause.end()))
        throw QueryError("cause " + describe(a, cause) + " consists of root states only");

    AbsCheckResult r;
    r.cause = cause;
    StateSet both;
    std::set_intersection(cause.begin(), cause.end(), ctx.Ehat.begin(), ctx.Ehat.end(), std::back_inserter(both));
    if (!both.empty()) {
        r.diagnostic = "cause overlaps the effect in " + describe(a, both);
        return r;
    }

    auto inC = membership(mdp.size(), cause);
    auto inE = membership(mdp.size(), ctx.Ehat);
    auto via = solve_ranked(mdp, Opt::Min, [&](StateId s, std::size_t rank) -> std::optional<Rational> {
        auto i = static_cast<std::size_t>(s);
        if (inC[i])
            return ctx.ev_min.after(s, rank);
        if (inE[i])
            return Rational(0);
        return std::nullopt;
    });
    Profile cw = max_counterfactual(mdp, cause, ctx.Ehat);

    for (StateId root : ctx.roots) {
        RootVerdict v;
        v.root = root;
        v.p_aw = via.entry(root);
        v.pc1 = v.p_aw > 0;
        for (StateId other : ctx.roots) {
            if (ctx.se && !ctx.se->se_holds(root, other))
                continue;
            const Rational& c = cw[static_cast<std::size_t>(other)];
            if (v.worst_cf_root < 0 || c > v.p_cw) {
                v.worst_cf_root = other;
                v.p_cw = c;
            }
        }
        v.pc2 = v.worst_cf_root < 0 || v.p_aw > v.p_cw;
        if (!r.confirmed && v.pc1 && v.pc2)
            r.confirmed = true;
        r.verdicts.push_back(v);
    }
    return r;
}

template <class Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn fn)
{
    if (k == 0 || k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    for (;;) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::string describe(const Abstraction& a, const StateSet& abs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < abs.size(); ++i) {
        if (i)
            out += ", ";
        out += a.state(abs[i]).name;
    }
    return out + "}";
}

PacQuery concrete_query(const Abstraction& a, const AbstractPacQuery& q)
{
    PacQuery c;
    c.model = &a.concrete();
    c.effect = q.effect;
    c.contingencies = q.contingencies;
    c.roots = q.roots;
    c.explicit_roots = q.explicit_roots;
    c.jobs = q.jobs;
    c.deadline = q.deadline;
    return c;
}

AbsCheckResult check_cause_abs(const Abstraction& a, const AbstractPacQuery& q, const StateSet& cause)
{
    return check_with(a, make_context(a, q), cause);
}

std::vector<StateSet> abstract_candidates(const Abstraction& a, const AbstractPacQuery& q)
{
    const Mdp& mdp = a.mdp();
    Context ctx = make_context(a, q);
    auto ev_max = eventually_ranked(mdp, ctx.Ehat, Opt::Max);
    auto inE = membership(mdp.size(), ctx.Ehat);
    auto rootish = membership(mdp.size(), a.lift(ctx.concrete_roots));
    auto inR = membership(mdp.size(), ctx.roots);

    std::vector<StateId> pool;
    for (std::size_t s = 0; s < mdp.size(); ++s) {
        if (inE[s] || rootish[s] || inR[s] || ev_max.entry(static_cast<StateId>(s)) == 0)
            continue;
        pool.push_back(static_cast<StateId>(s));
    }
    auto key = [&](StateId s) {
        int d = mdp.depth(s);
        return d < 0 ? INT_MAX : d;
    };
    std::stable_sort(pool.begin(), pool.end(),
                     [&](StateId x, StateId y) { return key(x) != key(y) ? key(x) < key(y) : x < y; });

    std::vector<StateSet> out;
    std::size_t kmax = q.candidates == CandidatePolicy::SingleState ? 1 : static_cast<std::size_t>(std::max(1, q.max_subset));
    for (std::size_t k = 1; k <= kmax; ++k) {
        for_each_combination(pool.size(), k, [&](const std::vector<std::size_t>& idx) {
            StateSet c;
            for (std::size_t i : idx)
                c.push_back(pool[i]);
            std::sort(c.begin(), c.end());
            out.push_back(std::move(c));
        });
    }
    return out;
}

AbsDiscovery discover_abs(const Abstraction& a, const AbstractPacQuery& q)
{
    if (q.candidates == CandidatePolicy::PredicateTemplate)
        throw QueryError("predicate templates are not supported on abstractions");
    Context ctx = make_context(a, q);
    AbsDiscovery out;
    out.effect = ctx.Ehat;
    out.mixed = a.mixed(ctx.E);

    auto candidates = abstract_candidates(a, q);
    PacQuery cq = concrete_query(a, q);
    cq.jobs = 1;

    std::size_t start = 0;
    while (start < candidates.size()) {
        std::size_t n = candidates.size() - start;
        std::size_t hit = first_match(n, q.jobs, [&](std::size_t i) {
            if (q.deadline)
                q.deadline->check();
            return check_with(a, ctx, candidates[start + i]).confirmed;
        });
        if (hit == n)
            break;
        const StateSet& abs_cause = candidates[start + hit];
        StateSet concrete_cause = a.concretize(abs_cause);
        CheckResult verified = check_cause(cq, concrete_cause);
        if (verified.confirmed) {
            out.report = verified.report;
            for (StateId s : abs_cause)
                out.report->abstract_cause.push_back(a.state(s).name);
            return out;
        }
        out.spurious.push_back(abs_cause);
        start += hit + 1;
    }
    return out;
}

} // namespace pac
