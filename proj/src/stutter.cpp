#include "pac/stutter.hpp"

#include <algorithm>

namespace pac {

std::vector<WValuation> w_valuations(const Dtmc& m, const std::vector<Predicate>& W)
{
    std::vector<WValuation> out(m.size(), WValuation(W.size(), 0));
    for (std::size_t k = 0; k < W.size(); ++k) {
        auto c = W[k].compile(m.scope());
        for (std::size_t s = 0; s < m.size(); ++s) {
            const State& st = m.states()[s];
            out[s][k] = c.eval(st.values, st.labels) ? 1 : 0;
        }
    }
    return out;
}

StutterSystem::StutterSystem(const Dtmc& m, const std::vector<Predicate>& W) : m_(&m), w_(w_valuations(m, W))
{
    st_.assign(m.size(), Rational(0));
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        for (const auto& t : m.successors(sid))
            if (eqw(sid, t.target))
                st_[s] += t.prob;
    }
}

bool StutterSystem::eqw(StateId s, StateId t) const
{
    return w_[static_cast<std::size_t>(s)] == w_[static_cast<std::size_t>(t)];
}

Rational StutterSystem::neqw(StateId s, StateId t) const
{
    Rational acc = 0;
    for (const auto& a : m_->successors(s))
        for (const auto& b : m_->successors(t))
            if (eqw(a.target, b.target))
                acc += a.prob * b.prob;
    return acc;
}

Rational StutterSystem::stueq(StateId partner, StateId t) const
{
    std::lock_guard lock(mu_);
    auto it = stueq_.find(partner);
    if (it == stueq_.end()) {
        const Dtmc& m = *m_;
        Profile v(m.size());
        const auto& order = m.topological_order();
        for (auto r = order.rbegin(); r != order.rend(); ++r) {
            StateId u = *r;
            auto i = static_cast<std::size_t>(u);
            if (eqw(partner, u)) {
                v[i] = 1;
            } else if (st_[i] == 0 || m.absorbing(u)) {
                // an absorbing state that never agrees stutters forever: least fixed point 0
                v[i] = 0;
            } else {
                Rational acc = 0;
                for (const auto& e : m.successors(u))
                    acc += e.prob * v[static_cast<std::size_t>(e.target)];
                v[i] = st_[i] * acc;
            }
        }
        it = stueq_.emplace(partner, std::move(v)).first;
    }
    return it->second[static_cast<std::size_t>(t)];
}

bool StutterSystem::se_holds(StateId s, StateId t) const
{
    auto side = [&](StateId a, StateId b) {
        Rational lhs = eqw(a, b) ? 1 : 0;
        return lhs <= neqw(a, b) + st(a) + stueq(a, b);
    };
    return side(s, t) && side(t, s);
}

// ---------------------------------------------------------------------------

AbstractStutterSystem::AbstractStutterSystem(const Mdp& m, std::vector<WValuation> w) : m_(&m), w_(std::move(w))
{
    st_.assign(m.size(), Rational(0));
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        bool first = true;
        for (const auto& a : m.actions(sid)) {
            Rational acc = 0;
            for (const auto& t : a.succ)
                if (eqw(sid, t.target))
                    acc += t.prob;
            if (first || acc < st_[s])
                st_[s] = acc;
            first = false;
        }
    }
}

bool AbstractStutterSystem::eqw(StateId s, StateId t) const
{
    return w_[static_cast<std::size_t>(s)] == w_[static_cast<std::size_t>(t)];
}

Rational AbstractStutterSystem::neqw(StateId s, StateId t) const
{
    std::optional<Rational> best;
    for (const auto& a : m_->actions(s)) {
        for (const auto& b : m_->actions(t)) {
            Rational acc = 0;
            for (const auto& x : a.succ)
                for (const auto& y : b.succ)
                    if (eqw(x.target, y.target))
                        acc += x.prob * y.prob;
            if (!best || acc < *best)
                best = acc;
        }
    }
    return best.value_or(Rational(0));
}

Rational AbstractStutterSystem::stueq(StateId partner, StateId t) const
{
    std::lock_guard lock(mu_);
    auto it = stueq_.find(partner);
    if (it == stueq_.end()) {
        auto values = solve_ranked(
            *m_, Opt::Min,
            [this, partner](StateId u, std::size_t) -> std::optional<Rational> {
                if (eqw(partner, u))
                    return Rational(1);
                if (st_[static_cast<std::size_t>(u)] == 0)
                    return Rational(0);
                return std::nullopt;
            },
            &st_);
        it = stueq_.emplace(partner, values.entries()).first;
    }
    return it->second[static_cast<std::size_t>(t)];
}

bool AbstractStutterSystem::se_holds(StateId s, StateId t) const
{
    auto side = [&](StateId a, StateId b) {
        Rational lhs = eqw(a, b) ? 1 : 0;
        return lhs <= neqw(a, b) + st(a) + stueq(a, b);
    };
    return side(s, t) && side(t, s);
}

} // namespace pac
