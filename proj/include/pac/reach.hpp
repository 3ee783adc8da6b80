#pragma once

#include "pac/model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace pac {

/// One exact value per state, indexed by StateId.
using Profile = std::vector<Rational>;

// ----- concrete chains -----------------------------------------------------

/// P_s(<> E). Absorbing states outside E get 0.
Profile prob_eventually(const Dtmc& m, const StateSet& E);

/// P_s(!Avoid U B).
Profile prob_avoid_until(const Dtmc& m, const StateSet& avoid, const StateSet& B);

/// Probability of reaching C before E and E afterwards: Pev(s) on C, 0 on
/// E \ C, otherwise the weighted sum over successors.
Profile prob_effect_via_cause(const Dtmc& m, const StateSet& C, const StateSet& E);

/// Probability of reaching E without passing through C \ E.
Profile prob_counterfactual(const Dtmc& m, const StateSet& C, const StateSet& E);

/// Literal product P_s(!E U C) * P_s(<> E) at a single state. Debug only;
/// the compositional value above is the one used for causes.
Rational prob_effect_via_cause_product(const Dtmc& m, const StateSet& C, const StateSet& E, StateId s);

/// Forward probability of hitting each state from `root` without passing
/// through `avoid` first (the state itself may be in `avoid`).
Profile forward_avoiding(const Dtmc& m, StateId root, const StateSet& avoid);

// ----- MDPs ------------------------------------------------------------------

enum class Opt { Min, Max };

/// Values of an optimization over rank-increasing schedulers. `after(s, r)`
/// is the optimum at s when only actions of rank > r remain available.
class RankedValues {
public:
    const Rational& entry(StateId s) const { return entry_[static_cast<std::size_t>(s)]; }
    Rational after(StateId s, std::size_t rank) const;
    const Profile& entries() const { return entry_; }

private:
    friend RankedValues solve_ranked(const Mdp&, Opt,
                                     const std::function<std::optional<Rational>(StateId, std::size_t)>&,
                                     const Profile*, bool);
    struct Step {
        std::size_t rank;
        Rational value;
    };
    Profile entry_;
    std::vector<std::vector<Step>> history_; // per state, ranks descending
    std::vector<std::optional<Rational>> fixed_;
    std::function<std::optional<Rational>(StateId, std::size_t)> boundary_;
};

/// Rank-ordered backward optimization. `boundary(s, r)` overrides the value
/// of s when entered after an action of rank r (r = npos at the entry);
/// `scale`, when given, multiplies each state's action values. `after` is
/// only available with `keep_history`.
RankedValues solve_ranked(const Mdp& m, Opt opt,
                          const std::function<std::optional<Rational>(StateId, std::size_t)>& boundary,
                          const Profile* scale = nullptr, bool keep_history = false);

struct Interval {
    Rational lo;
    Rational hi;
};

/// Pmin / Pmax of <> E per state.
std::vector<Interval> min_max_eventually(const Mdp& m, const StateSet& E);

RankedValues eventually_ranked(const Mdp& m, const StateSet& E, Opt opt);

/// Minimum effect-via-cause value per state.
Profile min_effect_via_cause(const Mdp& m, const StateSet& C, const StateSet& E);

/// Maximum counterfactual value per state.
Profile max_counterfactual(const Mdp& m, const StateSet& C, const StateSet& E);

} // namespace pac
