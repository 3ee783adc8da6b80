#include "pac/reach.hpp"

#include <algorithm>
#include <stdexcept>
#include <limits>

namespace pac {

namespace {

constexpr std::size_t kEntry = std::numeric_limits<std::size_t>::max();

// Backward pass in reverse topological order. `fixed` decides boundary
// values; everything else sums over non-self successors.
template <class Fixed>
Profile backward(const Dtmc& m, Fixed fixed)
{
    Profile v(m.size());
    const auto& order = m.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        StateId s = *it;
        auto& out = v[static_cast<std::size_t>(s)];
        if (fixed(s, out))
            continue;
        if (m.absorbing(s)) {
            out = 0;
            continue;
        }
        Rational acc = 0;
        for (const auto& t : m.successors(s))
            acc += t.prob * v[static_cast<std::size_t>(t.target)];
        out = acc;
    }
    return v;
}

} // namespace

Profile prob_eventually(const Dtmc& m, const StateSet& E)
{
    auto inE = membership(m.size(), E);
    return backward(m, [&](StateId s, Rational& out) {
        if (!inE[static_cast<std::size_t>(s)])
            return false;
        out = 1;
        return true;
    });
}

Profile prob_avoid_until(const Dtmc& m, const StateSet& avoid, const StateSet& B)
{
    auto inA = membership(m.size(), avoid);
    auto inB = membership(m.size(), B);
    return backward(m, [&](StateId s, Rational& out) {
        auto i = static_cast<std::size_t>(s);
        if (inB[i]) {
            out = 1;
            return true;
        }
        if (inA[i]) {
            out = 0;
            return true;
        }
        return false;
    });
}

Profile prob_effect_via_cause(const Dtmc& m, const StateSet& C, const StateSet& E)
{
    Profile ev = prob_eventually(m, E);
    auto inC = membership(m.size(), C);
    auto inE = membership(m.size(), E);
    return backward(m, [&](StateId s, Rational& out) {
        auto i = static_cast<std::size_t>(s);
        if (inC[i]) {
            out = ev[i];
            return true;
        }
        if (inE[i]) {
            out = 0;
            return true;
        }
        return false;
    });
}

Profile prob_counterfactual(const Dtmc& m, const StateSet& C, const StateSet& E)
{
    auto inC = membership(m.size(), C);
    auto inE = membership(m.size(), E);
    return backward(m, [&](StateId s, Rational& out) {
        auto i = static_cast<std::size_t>(s);
        if (inE[i]) {
            out = 1;
            return true;
        }
        if (inC[i]) {
            out = 0;
            return true;
        }
        return false;
    });
}

Rational prob_effect_via_cause_product(const Dtmc& m, const StateSet& C, const StateSet& E, StateId s)
{
    auto i = static_cast<std::size_t>(s);
    return prob_avoid_until(m, E, C)[i] * prob_eventually(m, E)[i];
}

Profile forward_avoiding(const Dtmc& m, StateId root, const StateSet& avoid)
{
    auto inA = membership(m.size(), avoid);
    Profile f(m.size());
    f[static_cast<std::size_t>(root)] = 1;
    for (StateId s : m.topological_order()) {
        auto i = static_cast<std::size_t>(s);
        if (f[i] == 0 || inA[i] || m.absorbing(s))
            continue;
        for (const auto& t : m.successors(s))
            f[static_cast<std::size_t>(t.target)] += f[i] * t.prob;
    }
    return f;
}

// ---------------------------------------------------------------------------

Rational RankedValues::after(StateId s, std::size_t rank) const
{
    auto i = static_cast<std::size_t>(s);
    if (boundary_) {
        if (auto b = boundary_(s, rank))
            return *b;
    }
    if (rank == kEntry)
        return entry_[i];
    if (history_.empty())
        throw std::logic_error("ranked values were solved without history");
    // history_ is ordered by descending rank; the last step above `rank`
    // holds the optimum over every action still allowed.
    const auto& h = history_[i];
    auto it = std::partition_point(h.begin(), h.end(), [&](const Step& st) { return st.rank > rank; });
    if (it == h.begin())
        return 0;
    return std::prev(it)->value;
}

RankedValues solve_ranked(const Mdp& m, Opt opt,
                          const std::function<std::optional<Rational>(StateId, std::size_t)>& boundary,
                          const Profile* scale, bool keep_history)
{
    const std::size_t n = m.size();
    RankedValues out;
    out.entry_.assign(n, Rational(0));
    if (keep_history)
        out.history_.assign(n, {});
    out.boundary_ = boundary;

    std::vector<char> is_fixed(n, 0);
    for (std::size_t s = 0; s < n; ++s)
        if (boundary(static_cast<StateId>(s), kEntry))
            is_fixed[s] = 1;

    std::vector<Rational> best(n);
    std::vector<char> has_best(n, 0);
    Rational q, vt;
    for (const auto& ref : m.rank_order()) {
        auto si = static_cast<std::size_t>(ref.state);
        if (is_fixed[si])
            continue;
        const Action& a = m.actions(ref.state)[ref.index];
        q = 0;
        if (!a.terminal) {
            for (const auto& t : a.succ) {
                auto ti = static_cast<std::size_t>(t.target);
                if (is_fixed[ti]) {
                    vt = *boundary(t.target, a.rank);
                    q += t.prob * vt;
                } else if (has_best[ti]) {
                    q += t.prob * best[ti];
                }
            }
            if (scale)
                q *= (*scale)[si];
        }
        if (!has_best[si] || (opt == Opt::Min ? q < best[si] : q > best[si])) {
            best[si] = q;
            has_best[si] = 1;
        }
        if (keep_history)
            out.history_[si].push_back({a.rank, best[si]});
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (is_fixed[s])
            out.entry_[s] = *boundary(static_cast<StateId>(s), kEntry);
        else if (has_best[s])
            out.entry_[s] = best[s];
    }
    return out;
}

RankedValues eventually_ranked(const Mdp& m, const StateSet& E, Opt opt)
{
    auto inE = membership(m.size(), E);
    return solve_ranked(
        m, opt,
        [inE](StateId s, std::size_t) -> std::optional<Rational> {
            if (inE[static_cast<std::size_t>(s)])
                return Rational(1);
            return std::nullopt;
        },
        nullptr, true);
}

std::vector<Interval> min_max_eventually(const Mdp& m, const StateSet& E)
{
    auto lo = eventually_ranked(m, E, Opt::Min);
    auto hi = eventually_ranked(m, E, Opt::Max);
    std::vector<Interval> out(m.size());
    for (std::size_t s = 0; s < m.size(); ++s)
        out[s] = {lo.entries()[s], hi.entries()[s]};
    return out;
}

Profile min_effect_via_cause(const Mdp& m, const StateSet& C, const StateSet& E)
{
    auto ev = eventually_ranked(m, E, Opt::Min);
    auto inC = membership(m.size(), C);
    auto inE = membership(m.size(), E);
    auto via = solve_ranked(m, Opt::Min, [&](StateId s, std::size_t r) -> std::optional<Rational> {
        auto i = static_cast<std::size_t>(s);
        if (inC[i])
            return ev.after(s, r);
        if (inE[i])
            return Rational(0);
        return std::nullopt;
    });
    return via.entries();
}

Profile max_counterfactual(const Mdp& m, const StateSet& C, const StateSet& E)
{
    auto inC = membership(m.size(), C);
    auto inE = membership(m.size(), E);
    auto cw = solve_ranked(m, Opt::Max, [inC, inE](StateId s, std::size_t) -> std::optional<Rational> {
        auto i = static_cast<std::size_t>(s);
        if (inE[i])
            return Rational(1);
        if (inC[i])
            return Rational(0);
        return std::nullopt;
    });
    return cw.entries();
}

} // namespace pac
