#pragma once

#include "pac/predicate.hpp"
#include "pac/rational.hpp"

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pac {

using StateId = int;

/// Sorted, duplicate-free list of state ids.
using StateSet = std::vector<StateId>;

inline const std::string kHalt = "halt";

struct Transition {
    StateId target;
    Rational prob;
};

struct State {
    std::string name;
    std::vector<Rational> values; // one per model variable, in declaration order
    std::set<std::string> labels;
};

/// Finite labeled Markov chain, acyclic apart from absorbing self-loops.
/// Immutable once constructed; the constructor validates every invariant and
/// throws ValidationError naming the first one violated.
///
/// `stochastic == false` relaxes row sums to "at most one". Subgraphs of a
/// chain keep their original edge probabilities and use this mode.
class Dtmc {
public:
    Dtmc(std::vector<std::string> vars, std::vector<State> states, std::vector<std::vector<Transition>> succ,
         std::vector<StateId> initial, bool stochastic = true);

    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t size() const { return states_.size(); }
    const State& state(StateId s) const { return states_[static_cast<std::size_t>(s)]; }
    const std::vector<State>& states() const { return states_; }
    std::span<const Transition> successors(StateId s) const { return succ_[static_cast<std::size_t>(s)]; }
    const std::vector<StateId>& initial() const { return initial_; }
    bool stochastic() const { return stochastic_; }
    bool absorbing(StateId s) const { return absorbing_[static_cast<std::size_t>(s)] != 0; }

    /// Sources first; ties broken by lower id.
    const std::vector<StateId>& topological_order() const { return topo_; }
    std::size_t rank(StateId s) const { return rank_[static_cast<std::size_t>(s)]; }

    /// Shortest distance from the initial set; -1 if unreachable.
    int depth(StateId s) const { return depth_[static_cast<std::size_t>(s)]; }

    const std::set<std::string>& props() const { return props_; }
    Scope scope() const { return Scope{vars_, &props_}; }

    /// -1 when no state has that name.
    StateId find(std::string_view name) const;

private:
    std::vector<std::string> vars_;
    std::vector<State> states_;
    std::vector<std::vector<Transition>> succ_;
    std::vector<StateId> initial_;
    bool stochastic_;

    std::vector<char> absorbing_;
    std::vector<StateId> topo_;
    std::vector<std::size_t> rank_;
    std::vector<int> depth_;
    std::set<std::string> props_;
    std::unordered_map<std::string, StateId> index_;
};

/// Incremental construction helper; `build()` validates.
class DtmcBuilder {
public:
    explicit DtmcBuilder(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    StateId add_state(std::string name, std::vector<Rational> values, std::set<std::string> labels = {});
    void add_edge(StateId from, StateId to, Rational prob);
    void add_initial(StateId s) { initial_.push_back(s); }

    /// Gives every state without outgoing edges a halt self-loop.
    void close_leaves();

    std::size_t size() const { return states_.size(); }
    State& state(StateId s) { return states_[static_cast<std::size_t>(s)]; }

    Dtmc build(bool stochastic = true) const;

private:
    std::vector<std::string> vars_;
    std::vector<State> states_;
    std::vector<std::vector<Transition>> succ_;
    std::vector<StateId> initial_;
};

/// One nondeterministic choice. In abstractions `label` is the concrete state
/// the action stands for and `rank` its topological position; `terminal`
/// marks an absorbing concrete member (the action is a probability-one stay).
struct Action {
    StateId label;
    std::size_t rank;
    bool terminal = false;
    std::vector<Transition> succ;
};

/// Markov decision process over (typically abstract) states.
///
/// Validation requires action progress: every non-terminal action leading to
/// a state t must find at least one action at t of strictly larger rank.
/// Schedulers are read as choosing rank-increasing action sequences, which
/// is what any run of an underlying acyclic chain does.
class Mdp {
public:
    Mdp(std::vector<State> states, std::vector<std::vector<Action>> actions, std::vector<StateId> initial,
        bool stochastic = true);

    std::size_t size() const { return states_.size(); }
    const State& state(StateId s) const { return states_[static_cast<std::size_t>(s)]; }
    const std::vector<State>& states() const { return states_; }
    std::span<const Action> actions(StateId s) const { return actions_[static_cast<std::size_t>(s)]; }
    const std::vector<StateId>& initial() const { return initial_; }
    bool stochastic() const { return stochastic_; }
    const std::set<std::string>& props() const { return props_; }
    Scope scope() const { return Scope{{}, &props_}; }
    StateId find(std::string_view name) const;

    /// Shortest distance from the initial set over all actions; -1 if unreachable.
    int depth(StateId s) const { return depth_[static_cast<std::size_t>(s)]; }

    struct ActionRef {
        StateId state;
        std::size_t index;
    };
    /// Every action, by descending rank then ascending state.
    const std::vector<ActionRef>& rank_order() const { return rank_order_; }

private:
    std::vector<State> states_;
    std::vector<std::vector<Action>> actions_;
    std::vector<ActionRef> rank_order_;
    std::vector<StateId> initial_;
    bool stochastic_;
    std::set<std::string> props_;
    std::vector<int> depth_;
};

/// States of a chain satisfying `phi`. Throws UnboundVariable.
StateSet satisfying_set(const Predicate& phi, const Dtmc& m);

/// Label-only evaluation over MDP states.
StateSet satisfying_set(const Predicate& phi, const Mdp& m);

bool eval_predicate(const Predicate& phi, const Dtmc& m, StateId s);

/// Dense membership vector of length n.
std::vector<char> membership(std::size_t n, const StateSet& set);

StateSet from_membership(const std::vector<char>& flags);

} // namespace pac
