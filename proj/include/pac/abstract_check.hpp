#pragma once

#include "pac/abstraction.hpp"
#include "pac/concrete.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pac {

enum class WStrategy { Subgraphs, WPreserving };

/// The effect, contingencies and policies are evaluated against the concrete
/// chain of whatever Abstraction the query is checked on; in subgraph mode
/// that is the sub-chain, not `model`.
struct AbstractPacQuery {
    const Dtmc* model = nullptr;
    Predicate effect;
    std::vector<Predicate> contingencies;
    WStrategy strategy = WStrategy::WPreserving;
    RootPolicy roots = RootPolicy::InitialOnly;
    StateSet explicit_roots; // concrete ids
    CandidatePolicy candidates = CandidatePolicy::SingleState;
    int max_subset = 2;
    int jobs = 1;
    const Deadline* deadline = nullptr;
};

struct AbsCheckResult {
    bool confirmed = false;
    StateSet cause; // abstract ids
    std::vector<RootVerdict> verdicts; // roots are abstract ids; values are min via / max counterfactual
    std::string diagnostic;
};

struct AbsDiscovery {
    std::optional<CauseReport> report; // confirmed abstractly and on the concrete chain
    std::vector<StateSet> spurious;    // confirmed abstractly, refuted concretely
    StateSet effect;                   // Ê
    StateSet mixed;                    // members of Ê that also contain non-effect states
};

/// The concrete query an abstract one is post-verified with.
PacQuery concrete_query(const Abstraction& a, const AbstractPacQuery& q);

AbsCheckResult check_cause_abs(const Abstraction& a, const AbstractPacQuery& q, const StateSet& cause);

/// Abstract candidates after pruning Ê, states with Pmax = 0, and states
/// containing a concrete root; ordered by MDP depth, then abstract id.
std::vector<StateSet> abstract_candidates(const Abstraction& a, const AbstractPacQuery& q);

AbsDiscovery discover_abs(const Abstraction& a, const AbstractPacQuery& q);

std::string describe(const Abstraction& a, const StateSet& abs);

} // namespace pac
