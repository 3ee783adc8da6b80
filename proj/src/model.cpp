#include "pac/model.hpp"

#include "pac/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

namespace pac {

namespace {

std::string name_of(const std::vector<State>& states, StateId s)
{
    return states[static_cast<std::size_t>(s)].name;
}

// Kahn's algorithm over non-self-loop edges, smallest id first.
std::vector<StateId> topo_sort(std::size_t n, const std::function<void(StateId, std::vector<StateId>&)>& next,
                               const std::vector<State>& states)
{
    std::vector<std::size_t> indeg(n, 0);
    std::vector<StateId> buf;
    for (std::size_t s = 0; s < n; ++s) {
        buf.clear();
        next(static_cast<StateId>(s), buf);
        for (StateId t : buf)
            ++indeg[static_cast<std::size_t>(t)];
    }
    std::priority_queue<StateId, std::vector<StateId>, std::greater<>> ready;
    for (std::size_t s = 0; s < n; ++s)
        if (indeg[s] == 0)
            ready.push(static_cast<StateId>(s));
    std::vector<StateId> order;
    order.reserve(n);
    while (!ready.empty()) {
        StateId s = ready.top();
        ready.pop();
        order.push_back(s);
        buf.clear();
        next(s, buf);
        for (StateId t : buf)
            if (--indeg[static_cast<std::size_t>(t)] == 0)
                ready.push(t);
    }
    if (order.size() != n) {
        for (std::size_t s = 0; s < n; ++s)
            if (indeg[s] != 0)
                throw ValidationError("acyclic", "cycle through state " + name_of(states, static_cast<StateId>(s)));
    }
    return order;
}

std::vector<int> bfs_depth(std::size_t n, const std::vector<StateId>& initial,
                           const std::function<void(StateId, std::vector<StateId>&)>& next)
{
    std::vector<int> depth(n, -1);
    std::deque<StateId> queue;
    for (StateId s : initial) {
        if (depth[static_cast<std::size_t>(s)] < 0) {
            depth[static_cast<std::size_t>(s)] = 0;
            queue.push_back(s);
        }
    }
    std::vector<StateId> buf;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        buf.clear();
        next(s, buf);
        for (StateId t : buf) {
            if (depth[static_cast<std::size_t>(t)] < 0) {
                depth[static_cast<std::size_t>(t)] = depth[static_cast<std::size_t>(s)] + 1;
                queue.push_back(t);
            }
        }
    }
    return depth;
}

void check_row(const std::vector<State>& states, StateId s, std::span<const Transition> row, bool stochastic,
               const std::string& what)
{
    if (row.empty())
        throw ValidationError("row-stochastic", what + " of state " + name_of(states, s) + " has no transitions");
    Rational sum = 0;
    std::vector<StateId> seen;
    for (const auto& t : row) {
        if (t.target < 0 || static_cast<std::size_t>(t.target) >= states.size())
            throw ValidationError("unknown-state", "edge from " + name_of(states, s) + " to an unknown state");
        if (t.prob <= 0 || t.prob > 1)
            throw ValidationError("probability-range", "edge " + name_of(states, s) + " -> "
                                                           + name_of(states, t.target) + " has probability "
                                                           + to_string(t.prob));
        seen.push_back(t.target);
        sum += t.prob;
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ValidationError("duplicate-edge", what + " of state " + name_of(states, s) + " repeats a target");
    if (stochastic ? sum != 1 : sum > 1)
        throw ValidationError("row-stochastic", what + " of state " + name_of(states, s) + " sums to "
                                                    + to_string(sum));
}

} // namespace

// ---------------------------------------------------------------------------

Dtmc::Dtmc(std::vector<std::string> vars, std::vector<State> states, std::vector<std::vector<Transition>> succ,
           std::vector<StateId> initial, bool stochastic)
    : vars_(std::move(vars)), states_(std::move(states)), succ_(std::move(succ)), initial_(std::move(initial)),
      stochastic_(stochastic)
{
    const std::size_t n = states_.size();
    if (n == 0)
        throw ValidationError("non-empty", "model has no states");
    if (succ_.size() != n)
        throw ValidationError("row-stochastic", "transition table does not match the state list");

    for (std::size_t s = 0; s < n; ++s) {
        const State& st = states_[s];
        if (st.values.size() != vars_.size())
            throw ValidationError("variable-arity", "state " + st.name + " binds " + std::to_string(st.values.size())
                                                        + " values for " + std::to_string(vars_.size()) + " variables");
        if (!index_.emplace(st.name, static_cast<StateId>(s)).second)
            throw ValidationError("unique-names", "state " + st.name + " declared twice");
        props_.insert(st.labels.begin(), st.labels.end());
    }
    props_.insert(kHalt);

    absorbing_.assign(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        const auto sid = static_cast<StateId>(s);
        check_row(states_, sid, succ_[s], stochastic_, "row");
        bool self = std::any_of(succ_[s].begin(), succ_[s].end(), [&](const Transition& t) { return t.target == sid; });
        if (self && (succ_[s].size() != 1 || succ_[s].front().prob != 1))
            throw ValidationError("absorbing-self-loop", "state " + states_[s].name
                                                             + " mixes a self-loop with other edges");
        absorbing_[s] = self ? 1 : 0;
        bool halt = states_[s].labels.count(kHalt) != 0;
        if (self != halt)
            throw ValidationError("halt-iff-absorbing", "state " + states_[s].name
                                                            + (self ? " is absorbing without the halt label"
                                                                    : " carries halt but is not absorbing"));
    }

    auto next = [this](StateId s, std::vector<StateId>& out) {
        for (const auto& t : succ_[static_cast<std::size_t>(s)])
            if (t.target != s)
                out.push_back(t.target);
    };
    topo_ = topo_sort(n, next, states_);
    rank_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        rank_[static_cast<std::size_t>(topo_[i])] = i;

    if (initial_.empty()) {
        std::vector<char> has_pred(n, 0);
        for (std::size_t s = 0; s < n; ++s)
            for (const auto& t : succ_[s])
                if (t.target != static_cast<StateId>(s))
                    has_pred[static_cast<std::size_t>(t.target)] = 1;
        for (std::size_t s = 0; s < n; ++s)
            if (!has_pred[s])
                initial_.push_back(static_cast<StateId>(s));
    }
    std::sort(initial_.begin(), initial_.end());
    initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
    for (StateId s : initial_)
        if (s < 0 || static_cast<std::size_t>(s) >= n)
            throw ValidationError("unknown-state", "initial state out of range");
    if (initial_.empty())
        throw ValidationError("initial-non-empty", "no initial state");

    depth_ = bfs_depth(n, initial_, next);
}

StateId Dtmc::find(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------

StateId DtmcBuilder::add_state(std::string name, std::vector<Rational> values, std::set<std::string> labels)
{
    states_.push_back(State{std::move(name), std::move(values), std::move(labels)});
    succ_.emplace_back();
    return static_cast<StateId>(states_.size() - 1);
}

void DtmcBuilder::add_edge(StateId from, StateId to, Rational prob)
{
    succ_[static_cast<std::size_t>(from)].push_back(Transition{to, std::move(prob)});
}

void DtmcBuilder::close_leaves()
{
    for (std::size_t s = 0; s < states_.size(); ++s) {
        if (succ_[s].empty()) {
            succ_[s].push_back(Transition{static_cast<StateId>(s), Rational(1)});
            states_[s].labels.insert(kHalt);
        }
    }
}

Dtmc DtmcBuilder::build(bool stochastic) const
{
    return Dtmc(vars_, states_, succ_, initial_, stochastic);
}

// ---------------------------------------------------------------------------

Mdp::Mdp(std::vector<State> states, std::vector<std::vector<Action>> actions, std::vector<StateId> initial,
         bool stochastic)
    : states_(std::move(states)), actions_(std::move(actions)), initial_(std::move(initial)), stochastic_(stochastic)
{
    const std::size_t n = states_.size();
    if (n == 0)
        throw ValidationError("non-empty", "MDP has no states");
    if (actions_.size() != n)
        throw ValidationError("enabled-actions", "action table does not match the state list");
    for (const auto& st : states_)
        props_.insert(st.labels.begin(), st.labels.end());
    props_.insert(kHalt);

    for (std::size_t s = 0; s < n; ++s) {
        const auto sid = static_cast<StateId>(s);
        if (actions_[s].empty())
            throw ValidationError("enabled-actions", "state " + states_[s].name + " has no enabled action");
        for (const auto& a : actions_[s]) {
            check_row(states_, sid, a.succ, stochastic_, "action " + std::to_string(a.label));
            if (a.terminal && (a.succ.size() != 1 || a.succ.front().target != sid || a.succ.front().prob != 1))
                throw ValidationError("absorbing-self-loop", "terminal action " + std::to_string(a.label)
                                                                 + " of state " + states_[s].name
                                                                 + " is not a probability-one stay");
        }
    }
    // Max action rank per state, for the progress check.
    std::vector<std::size_t> top(n, 0);
    std::vector<char> has(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& a : actions_[s]) {
            if (!has[s] || a.rank > top[s])
                top[s] = a.rank;
            has[s] = 1;
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& a : actions_[s]) {
            if (a.terminal)
                continue;
            for (const auto& t : a.succ) {
                if (top[static_cast<std::size_t>(t.target)] <= a.rank)
                    throw ValidationError("action-progress",
                                          "action " + std::to_string(a.label) + " of state " + states_[s].name
                                              + " reaches " + states_[static_cast<std::size_t>(t.target)].name
                                              + " which has no later action");
            }
        }
    }

    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < actions_[s].size(); ++i)
            rank_order_.push_back({static_cast<StateId>(s), i});
    std::sort(rank_order_.begin(), rank_order_.end(), [this](const ActionRef& a, const ActionRef& b) {
        std::size_t ra = actions_[static_cast<std::size_t>(a.state)][a.index].rank;
        std::size_t rb = actions_[static_cast<std::size_t>(b.state)][b.index].rank;
        return ra != rb ? ra > rb : a.state < b.state;
    });

    if (initial_.empty())
        throw ValidationError("initial-non-empty", "no initial state");
    std::sort(initial_.begin(), initial_.end());
    initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());

    depth_ = bfs_depth(n, initial_, [this](StateId s, std::vector<StateId>& out) {
        for (const auto& a : actions_[static_cast<std::size_t>(s)])
            for (const auto& t : a.succ)
                if (t.target != s)
                    out.push_back(t.target);
    });
}

StateId Mdp::find(std::string_view name) const
{
    for (std::size_t s = 0; s < states_.size(); ++s)
        if (states_[s].name == name)
            return static_cast<StateId>(s);
    return -1;
}

// ---------------------------------------------------------------------------

StateSet satisfying_set(const Predicate& phi, const Dtmc& m)
{
    auto compiled = phi.compile(m.scope());
    StateSet out;
    for (std::size_t s = 0; s < m.size(); ++s) {
        const State& st = m.state(static_cast<StateId>(s));
        if (compiled.eval(st.values, st.labels))
            out.push_back(static_cast<StateId>(s));
    }
    return out;
}

StateSet satisfying_set(const Predicate& phi, const Mdp& m)
{
    auto compiled = phi.compile(m.scope());
    StateSet out;
    for (std::size_t s = 0; s < m.size(); ++s) {
        const State& st = m.state(static_cast<StateId>(s));
        if (compiled.eval(st.values, st.labels))
            out.push_back(static_cast<StateId>(s));
    }
    return out;
}

bool eval_predicate(const Predicate& phi, const Dtmc& m, StateId s)
{
    const State& st = m.state(s);
    return phi.compile(m.scope()).eval(st.values, st.labels);
}

std::vector<char> membership(std::size_t n, const StateSet& set)
{
    std::vector<char> flags(n, 0);
    for (StateId s : set)
        flags[static_cast<std::size_t>(s)] = 1;
    return flags;
}

StateSet from_membership(const std::vector<char>& flags)
{
    StateSet out;
    for (std::size_t s = 0; s < flags.size(); ++s)
        if (flags[s])
            out.push_back(static_cast<StateId>(s));
    return out;
}

} // namespace pac
