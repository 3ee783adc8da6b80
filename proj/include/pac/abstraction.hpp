#pragma once

#include "pac/model.hpp"
#include "pac/reach.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pac {

enum class AbsMode { Plain, WPreserving };

struct AbstractState {
    std::uint64_t value = 0; // predicate bits, first predicate most significant
    StateId split = -1;      // concrete member of a state extracted by a split
    StateSet members;        // concretization, sorted
    std::string name;        // ŝ_<value> or ŝ_<value>,<member>
};

/// Partition of the reachable concrete states by predicate valuation, with
/// the MDP it induces: the actions of an abstract state are its concrete
/// members.
class Abstraction {
public:
    const Dtmc& concrete() const { return *m_; }
    const std::vector<Predicate>& predicates() const { return preds_; }
    const std::vector<Predicate>& contingencies() const { return w_; }
    AbsMode mode() const { return mode_; }
    const std::vector<AbstractState>& states() const { return states_; }
    const AbstractState& state(StateId s) const { return states_[static_cast<std::size_t>(s)]; }
    const Mdp& mdp() const { return mdp_; }
    std::size_t size() const { return states_.size(); }

    /// Abstract state of a concrete state; -1 if unreachable from the initial set.
    StateId of(StateId concrete) const { return of_[static_cast<std::size_t>(concrete)]; }

    /// Union of the concretizations.
    StateSet concretize(const StateSet& abs) const;

    /// Abstract states whose concretization meets `set`.
    StateSet lift(const StateSet& set) const;

    /// Abstract states whose concretization meets `set` without being inside it.
    StateSet mixed(const StateSet& set) const;

    bool finest() const;
    StateId find(std::string_view name) const;

    /// Lines `ŝ_1: s1 s3 s4`.
    std::string abs_map() const;

    /// Text form of the induced MDP: states, then `act <state> <action> <target> <prob>` lines.
    std::string serialize_mdp() const;

private:
    friend Abstraction abstract(const Dtmc&, const std::vector<Predicate>&, AbsMode, const std::vector<Predicate>&);
    friend Abstraction refine_split(const Abstraction&, StateId, const Rational&, const Profile&);

    Abstraction(const Dtmc& m, std::vector<Predicate> preds, std::vector<Predicate> w, AbsMode mode,
                std::vector<AbstractState> groups);

    const Dtmc* m_;
    std::vector<Predicate> preds_;
    std::vector<Predicate> w_;
    AbsMode mode_;
    std::vector<AbstractState> states_;
    std::vector<StateId> of_;
    Mdp mdp_;
};

/// Groups reachable states by the bit vector of `preds`; in W-preserving
/// mode the contingency predicates are appended as extra low bits.
Abstraction abstract(const Dtmc& m, const std::vector<Predicate>& preds, AbsMode mode = AbsMode::Plain,
                     const std::vector<Predicate>& W = {});

/// Extracts max(1, ceil((1 - alpha) * n)) members of `target` as singletons,
/// preferring members whose `concrete_ev` deviates most from the member mean
/// (ties to the lower id). Splits completely when at most one would remain.
Abstraction refine_split(const Abstraction& a, StateId target, const Rational& alpha, const Profile& concrete_ev);

} // namespace pac
