#pragma once

#include "pac/deadline.hpp"
#include "pac/model.hpp"
#include "pac/reach.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pac {

enum class RootPolicy { InitialOnly, Explicit, AllStates };
enum class CandidatePolicy { SingleState, Subsets, PredicateTemplate };

struct PacQuery {
    const Dtmc* model = nullptr;
    Predicate effect;
    std::vector<Predicate> contingencies; // W
    RootPolicy roots = RootPolicy::InitialOnly;
    StateSet explicit_roots;
    CandidatePolicy candidates = CandidatePolicy::SingleState;
    int max_subset = 2;                 // Subsets: largest set size; templates: largest conjunction
    std::vector<Predicate> template_atoms;
    int jobs = 1;
    const Deadline* deadline = nullptr;
};

/// Outcome of evaluating one actual-world root.
struct RootVerdict {
    StateId root = -1;
    Rational p_aw;
    bool pc1 = false;
    StateId worst_cf_root = -1; // SE-compatible root with the largest counterfactual value
    Rational p_cw;
    bool pc2 = false;
};

struct CauseReport {
    StateSet cause;
    Predicate cause_predicate;
    StateId root = -1;
    Rational p_aw;
    StateId cf_root = -1;
    Rational p_cw;
    bool pc1 = false;
    /// 0 for concrete discovery, otherwise the refinement round that found it.
    int round = 0;
    /// Abstract state names when found through an abstraction.
    std::vector<std::string> abstract_cause;
};

struct CheckResult {
    bool confirmed = false;
    std::optional<CauseReport> report;
    std::vector<RootVerdict> verdicts;
    std::string diagnostic; // set when the check was refuted by a precondition
};

StateSet resolve_roots(const Dtmc& m, RootPolicy policy, const StateSet& explicit_roots);
StateSet effect_set(const PacQuery& q);

/// Equalities pinning each member's valuation, joined by disjunction.
Predicate cause_predicate(const Dtmc& m, const StateSet& cause);

/// Checks one candidate cause. Throws QueryError on an empty cause, an empty
/// root set, an empty effect set, or a cause made of roots only.
CheckResult check_cause(const PacQuery& q, const StateSet& cause);

/// Candidates in search order, after pruning effect, zero-reach and root states.
std::vector<StateSet> candidate_sets(const PacQuery& q);

/// First confirmed candidate in the documented order, or nothing.
std::optional<CauseReport> discover(const PacQuery& q);

std::string describe(const Dtmc& m, const StateSet& set);

} // namespace pac
