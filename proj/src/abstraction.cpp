#include "pac/abstraction.hpp"

#include "pac/errors.hpp"
#include "pac/stutter.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pac {

namespace {

std::string abstract_name(const Dtmc& m, std::uint64_t value, StateId split)
{
    (void)m;
    std::string n = "ŝ_" + std::to_string(value);
    if (split >= 0)
        n += "," + std::to_string(split);
    return n;
}

Mdp induce(const Dtmc& m, const std::vector<AbstractState>& states, const std::vector<StateId>& of)
{
    std::vector<State> abs(states.size());
    std::vector<std::vector<Action>> actions(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        abs[i].name = states[i].name;
        for (StateId c : states[i].members) {
            const auto& labels = m.state(c).labels;
            abs[i].labels.insert(labels.begin(), labels.end());
        }
        StateSet members = states[i].members;
        std::sort(members.begin(), members.end(), [&](StateId a, StateId b) { return m.rank(a) < m.rank(b); });
        for (StateId c : members) {
            Action a{c, m.rank(c), m.absorbing(c), {}};
            if (a.terminal) {
                a.succ.push_back({static_cast<StateId>(i), Rational(1)});
            } else {
                std::map<StateId, Rational> agg;
                for (const auto& t : m.successors(c))
                    agg[of[static_cast<std::size_t>(t.target)]] += t.prob;
                for (auto& [t, p] : agg)
                    a.succ.push_back({t, p});
            }
            actions[i].push_back(std::move(a));
        }
    }
    StateSet init;
    for (StateId s : m.initial())
        init.push_back(of[static_cast<std::size_t>(s)]);
    return Mdp(std::move(abs), std::move(actions), std::move(init), m.stochastic());
}

std::vector<StateId> index_of(std::size_t n, const std::vector<AbstractState>& states)
{
    std::vector<StateId> of(n, -1);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (StateId c : states[i].members)
            of[static_cast<std::size_t>(c)] = static_cast<StateId>(i);
    return of;
}

std::vector<AbstractState> ordered(std::vector<AbstractState> groups)
{
    std::sort(groups.begin(), groups.end(), [](const AbstractState& a, const AbstractState& b) {
        return a.value != b.value ? a.value < b.value : a.split < b.split;
    });
    return groups;
}

} // namespace

Abstraction::Abstraction(const Dtmc& m, std::vector<Predicate> preds, std::vector<Predicate> w, AbsMode mode,
                         std::vector<AbstractState> groups)
    : m_(&m), preds_(std::move(preds)), w_(std::move(w)), mode_(mode), states_(ordered(std::move(groups))),
      of_(index_of(m.size(), states_)), mdp_(induce(m, states_, of_))
{
}

StateSet Abstraction::concretize(const StateSet& abs) const
{
    StateSet out;
    for (StateId a : abs) {
        const auto& mem = state(a).members;
        out.insert(out.end(), mem.begin(), mem.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StateSet Abstraction::lift(const StateSet& set) const
{
    StateSet out;
    for (StateId c : set) {
        StateId a = of(c);
        if (a >= 0)
            out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StateSet Abstraction::mixed(const StateSet& set) const
{
    auto in = membership(m_->size(), set);
    StateSet out;
    for (StateId a : lift(set)) {
        const auto& mem = state(a).members;
        if (std::any_of(mem.begin(), mem.end(), [&](StateId c) { return !in[static_cast<std::size_t>(c)]; }))
            out.push_back(a);
    }
    return out;
}

bool Abstraction::finest() const
{
    return std::all_of(states_.begin(), states_.end(), [](const AbstractState& s) { return s.members.size() <= 1; });
}

StateId Abstraction::find(std::string_view name) const
{
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i].name == name)
            return static_cast<StateId>(i);
    return -1;
}

std::string Abstraction::abs_map() const
{
    std::ostringstream out;
    for (const auto& s : states_) {
        out << s.name << ':';
        for (StateId c : s.members)
            out << ' ' << m_->state(c).name;
        out << '\n';
    }
    return out.str();
}

std::string Abstraction::serialize_mdp() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < mdp_.size(); ++i) {
        const auto& st = mdp_.state(static_cast<StateId>(i));
        out << "state " << st.name << " labels:";
        for (const auto& l : st.labels)
            out << ' ' << l;
        out << '\n';
    }
    for (std::size_t i = 0; i < mdp_.size(); ++i) {
        auto sid = static_cast<StateId>(i);
        for (const auto& a : mdp_.actions(sid))
            for (const auto& t : a.succ)
                out << "act " << mdp_.state(sid).name << ' ' << m_->state(a.label).name << ' '
                    << mdp_.state(t.target).name << ' ' << to_string(t.prob) << '\n';
    }
    for (StateId s : mdp_.initial())
        out << "init " << mdp_.state(s).name << '\n';
    return out.str();
}

Abstraction abstract(const Dtmc& m, const std::vector<Predicate>& preds, AbsMode mode, const std::vector<Predicate>& W)
{
    std::vector<Predicate> bits = preds;
    if (mode == AbsMode::WPreserving)
        bits.insert(bits.end(), W.begin(), W.end());
    if (bits.size() > 63)
        throw QueryError("at most 63 abstraction predicates are supported");
    std::vector<CompiledPredicate> compiled;
    for (const auto& p : bits)
        compiled.push_back(p.compile(m.scope()));

    std::map<std::uint64_t, StateSet> groups;
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        if (m.depth(sid) < 0)
            continue;
        const State& st = m.state(sid);
        std::uint64_t v = 0;
        for (const auto& c : compiled)
            v = (v << 1) | (c.eval(st.values, st.labels) ? 1u : 0u);
        groups[v].push_back(sid);
    }
    std::vector<AbstractState> states;
    for (auto& [v, members] : groups)
        states.push_back(AbstractState{v, -1, std::move(members), abstract_name(m, v, -1)});
    return Abstraction(m, preds, mode == AbsMode::WPreserving ? W : std::vector<Predicate>{}, mode,
                       std::move(states));
}

Abstraction refine_split(const Abstraction& a, StateId target, const Rational& alpha, const Profile& concrete_ev)
{
    if (alpha <= 0 || alpha > 1)
        throw QueryError("split ratio must lie in (0, 1]");
    const AbstractState& t = a.state(target);
    const std::size_t n = t.members.size();
    if (n < 2)
        throw QueryError("cannot split singleton " + t.name);

    Rational extract = (1 - alpha) * static_cast<unsigned long>(n);
    mpz_class ceil_k;
    mpz_cdiv_q(ceil_k.get_mpz_t(), extract.get_num_mpz_t(), extract.get_den_mpz_t());
    std::size_t k = std::max<std::size_t>(1, ceil_k.get_ui());
    if (n - std::min(k, n) <= 1)
        k = n;

    Rational mean = 0;
    for (StateId c : t.members)
        mean += concrete_ev[static_cast<std::size_t>(c)];
    mean /= static_cast<unsigned long>(n);
    std::vector<std::pair<Rational, StateId>> dev;
    for (StateId c : t.members)
        dev.push_back({abs(concrete_ev[static_cast<std::size_t>(c)] - mean), c});
    std::stable_sort(dev.begin(), dev.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });

    std::vector<AbstractState> groups;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (static_cast<StateId>(i) != target)
            groups.push_back(a.state(static_cast<StateId>(i)));
    StateSet rest;
    for (std::size_t i = 0; i < n; ++i) {
        StateId c = dev[i].second;
        if (i < k)
            groups.push_back(AbstractState{t.value, c, {c}, abstract_name(a.concrete(), t.value, c)});
        else
            rest.push_back(c);
    }
    if (!rest.empty()) {
        std::sort(rest.begin(), rest.end());
        groups.push_back(AbstractState{t.value, t.split, std::move(rest), t.name});
    }
    return Abstraction(a.concrete(), a.predicates(), a.contingencies(), a.mode(), std::move(groups));
}

} // namespace pac
