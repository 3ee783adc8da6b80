#include "pac/concrete.hpp"

#include "pac/errors.hpp"
#include "pac/parallel.hpp"
#include "pac/stutter.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace pac {

namespace {

bool subset_of(const StateSet& a, const StateSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const StateSet& a, const StateSet& b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j])
            return true;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

// Lexicographic k-combinations of [0, n), in order.
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

// Root-pair SE relation; everything agrees when W is empty.
std::vector<std::vector<char>> se_matrix(const PacQuery& q, const StateSet& roots)
{
    std::vector<std::vector<char>> se(roots.size(), std::vector<char>(roots.size(), 1));
    if (q.contingencies.empty())
        return se;
    StutterSystem sys(*q.model, q.contingencies);
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = 0; j < roots.size(); ++j)
            se[i][j] = sys.se_holds(roots[i], roots[j]) ? 1 : 0;
    return se;
}

void check_query(const PacQuery& q)
{
    if (q.model == nullptr)
        throw QueryError("query has no model");
    for (const auto& w : q.contingencies)
        (void)w.compile(q.model->scope());
}

} // namespace

StateSet resolve_roots(const Dtmc& m, RootPolicy policy, const StateSet& explicit_roots)
{
    switch (policy) {
    case RootPolicy::InitialOnly:
        return m.initial();
    case RootPolicy::Explicit: {
        StateSet r = explicit_roots;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        for (StateId s : r)
            if (s < 0 || static_cast<std::size_t>(s) >= m.size())
                throw QueryError("root state out of range");
        return r;
    }
    case RootPolicy::AllStates: {
        StateSet r(m.size());
        for (std::size_t s = 0; s < m.size(); ++s)
            r[s] = static_cast<StateId>(s);
        return r;
    }
    }
    return {};
}

StateSet effect_set(const PacQuery& q)
{
    StateSet E = satisfying_set(q.effect, *q.model);
    if (E.empty())
        throw QueryError("effect predicate '" + q.effect.to_string() + "' holds in no state");
    return E;
}

Predicate cause_predicate(const Dtmc& m, const StateSet& cause)
{
    std::vector<Predicate> per_state;
    for (StateId s : cause) {
        std::vector<Predicate> eqs;
        const State& st = m.state(s);
        for (std::size_t v = 0; v < m.vars().size(); ++v)
            eqs.push_back(Predicate::compare(m.vars()[v], Cmp::Eq, st.values[v]));
        per_state.push_back(Predicate::conj_all(eqs));
    }
    return Predicate::disj_all(per_state);
}

std::string describe(const Dtmc& m, const StateSet& set)
{
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i)
            out += ", ";
        out += m.state(set[i]).name;
    }
    return out + "}";
}

CheckResult check_cause(const PacQuery& q, const StateSet& cause_in)
{
    check_query(q);
    const Dtmc& m = *q.model;
    StateSet cause = cause_in;
    std::sort(cause.begin(), cause.end());
    cause.erase(std::unique(cause.begin(), cause.end()), cause.end());
    if (cause.empty())
        throw QueryError("cause set is empty");
    for (StateId s : cause)
        if (s < 0 || static_cast<std::size_t>(s) >= m.size())
            throw QueryError("cause state out of range");
    StateSet roots = resolve_roots(m, q.roots, q.explicit_roots);
    if (roots.empty())
        throw QueryError("root set is empty");
    if (subset_of(cause, roots))
        throw QueryError("cause " + describe(m, cause) + " consists of root states only");
    StateSet E = effect_set(q);

    CheckResult result;
    if (intersects(cause, E)) {
        StateSet both;
        std::set_intersection(cause.begin(), cause.end(), E.begin(), E.end(), std::back_inserter(both));
        result.diagnostic = "cause overlaps the effect in " + describe(m, both);
        return result;
    }

    Profile aw = prob_effect_via_cause(m, cause, E);
    Profile cw = prob_counterfactual(m, cause, E);
    auto se = se_matrix(q, roots);

    for (std::size_t i = 0; i < roots.size(); ++i) {
        RootVerdict v;
        v.root = roots[i];
        v.p_aw = aw[static_cast<std::size_t>(v.root)];
        v.pc1 = v.p_aw > 0;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (!se[i][j])
                continue;
            const Rational& c = cw[static_cast<std::size_t>(roots[j])];
            if (v.worst_cf_root < 0 || c > v.p_cw) {
                v.worst_cf_root = roots[j];
                v.p_cw = c;
            }
        }
        v.pc2 = v.worst_cf_root < 0 || v.p_aw > v.p_cw;
        result.verdicts.push_back(v);
        if (!result.confirmed && v.pc1 && v.pc2) {
            result.confirmed = true;
            CauseReport r;
            r.cause = cause;
            r.cause_predicate = cause_predicate(m, cause);
            r.root = v.root;
            r.p_aw = v.p_aw;
            r.cf_root = v.worst_cf_root;
            r.p_cw = v.p_cw;
            r.pc1 = true;
            result.report = std::move(r);
        }
    }
    return result;
}

std::vector<StateSet> candidate_sets(const PacQuery& q)
{
    check_query(q);
    const Dtmc& m = *q.model;
    StateSet E = effect_set(q);
    StateSet roots = resolve_roots(m, q.roots, q.explicit_roots);
    Profile ev = prob_eventually(m, E);
    auto inE = membership(m.size(), E);
    auto inR = membership(m.size(), roots);

    std::vector<StateId> pool;
    for (std::size_t s = 0; s < m.size(); ++s)
        if (!inE[s] && !inR[s] && ev[s] > 0)
            pool.push_back(static_cast<StateId>(s));
    auto depth_key = [&](StateId s) {
        int d = m.depth(s);
        return d < 0 ? INT_MAX : d;
    };
    std::stable_sort(pool.begin(), pool.end(), [&](StateId a, StateId b) {
        return depth_key(a) != depth_key(b) ? depth_key(a) < depth_key(b) : a < b;
    });

    std::vector<StateSet> out;
    switch (q.candidates) {
    case CandidatePolicy::SingleState:
        for (StateId s : pool)
            out.push_back({s});
        break;
    case CandidatePolicy::Subsets: {
        std::size_t kmax = static_cast<std::size_t>(std::max(1, q.max_subset));
        for (std::size_t k = 1; k <= kmax; ++k) {
            for_each_combination(pool.size(), k, [&](const std::vector<std::size_t>& idx) {
                StateSet c;
                for (std::size_t i : idx)
                    c.push_back(pool[i]);
                std::sort(c.begin(), c.end());
                out.push_back(std::move(c));
            });
        }
        break;
    }
    case CandidatePolicy::PredicateTemplate: {
        auto inPool = membership(m.size(), pool);
        std::vector<StateSet> atom_sets;
        for (const auto& a : q.template_atoms)
            atom_sets.push_back(satisfying_set(a, m));
        std::set<StateSet> seen;
        std::size_t kmax = static_cast<std::size_t>(std::max(1, q.max_subset));
        for (std::size_t k = 1; k <= kmax; ++k) {
            for_each_combination(atom_sets.size(), k, [&](const std::vector<std::size_t>& idx) {
                std::vector<char> in(m.size(), 1);
                for (std::size_t i : idx) {
                    auto mem = membership(m.size(), atom_sets[i]);
                    for (std::size_t s = 0; s < m.size(); ++s)
                        in[s] = in[s] && mem[s];
                }
                StateSet c;
                for (std::size_t s = 0; s < m.size(); ++s)
                    if (in[s] && inPool[s])
                        c.push_back(static_cast<StateId>(s));
                if (!c.empty() && seen.insert(c).second)
                    out.push_back(std::move(c));
            });
        }
        break;
    }
    }
    return out;
}

std::optional<CauseReport> discover(const PacQuery& q)
{
    check_query(q);
    const Dtmc& m = *q.model;
    StateSet roots = resolve_roots(m, q.roots, q.explicit_roots);
    if (roots.empty())
        throw QueryError("root set is empty");
    auto candidates = candidate_sets(q);
    if (candidates.empty())
        return std::nullopt;

    if (q.candidates != CandidatePolicy::SingleState) {
        std::size_t hit = first_match(candidates.size(), q.jobs,
                                      [&](std::size_t i) {
                                          if (q.deadline)
                                              q.deadline->check();
                                          return check_cause(q, candidates[i]).confirmed;
                                      });
        if (hit == candidates.size())
            return std::nullopt;
        return check_cause(q, candidates[hit]).report;
    }

    // Single states: for c outside E, the via-c value at a root r is
    // f_r(c) * Pev(c) and the counterfactual is Pev(r) - f_r(c) * Pev(c),
    // where f_r is the forward mass reaching c before E.
    StateSet E = effect_set(q);
    Profile ev = prob_eventually(m, E);
    std::vector<Profile> fwd(roots.size());
    parallel_for(roots.size(), q.jobs, [&](std::size_t i) { fwd[i] = forward_avoiding(m, roots[i], E); });
    auto se = se_matrix(q, roots);

    std::size_t hit = first_match(candidates.size(), q.jobs, [&](std::size_t k) {
        if (q.deadline && k % 64 == 0)
            q.deadline->check();
        auto c = static_cast<std::size_t>(candidates[k].front());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            Rational via = fwd[i][c] * ev[c];
            if (via <= 0)
                continue;
            bool ok = true;
            for (std::size_t j = 0; j < roots.size() && ok; ++j) {
                if (!se[i][j])
                    continue;
                Rational cf = ev[static_cast<std::size_t>(roots[j])] - fwd[j][c] * ev[c];
                ok = via > cf;
            }
            if (ok)
                return true;
        }
        return false;
    });
    if (hit == candidates.size())
        return std::nullopt;
    CheckResult full = check_cause(q, candidates[hit]);
    if (!full.confirmed)
        throw std::logic_error("single-state filter and full check disagree on " + describe(m, candidates[hit]));
    return full.report;
}

} // namespace pac
