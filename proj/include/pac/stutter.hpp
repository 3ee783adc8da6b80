#pragma once

#include "pac/model.hpp"
#include "pac/reach.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace pac {

/// Valuation of each contingency predicate on each state, as 0/1 flags.
using WValuation = std::vector<char>;

std::vector<WValuation> w_valuations(const Dtmc& m, const std::vector<Predicate>& W);

/// Agreement and stuttering quantities over pairs of states of one chain.
/// `stueq(s, t)` fixes the partner s and recurses over t; it is computed
/// lazily and cached per partner.
class StutterSystem {
public:
    StutterSystem(const Dtmc& m, const std::vector<Predicate>& W);

    bool eqw(StateId s, StateId t) const;
    const Rational& st(StateId s) const { return st_[static_cast<std::size_t>(s)]; }
    Rational neqw(StateId s, StateId t) const;
    Rational stueq(StateId partner, StateId t) const;

    /// Both directed inequalities.
    bool se_holds(StateId s, StateId t) const;

    const std::vector<WValuation>& valuations() const { return w_; }

private:
    const Dtmc* m_;
    std::vector<WValuation> w_;
    Profile st_;
    mutable std::mutex mu_;
    mutable std::map<StateId, Profile> stueq_;
};

/// The same system over an MDP whose states carry a fixed W-valuation, with
/// the minimum taken over actions at every step.
class AbstractStutterSystem {
public:
    AbstractStutterSystem(const Mdp& m, std::vector<WValuation> w);

    bool eqw(StateId s, StateId t) const;
    const Rational& st(StateId s) const { return st_[static_cast<std::size_t>(s)]; }
    Rational neqw(StateId s, StateId t) const;
    Rational stueq(StateId partner, StateId t) const;
    bool se_holds(StateId s, StateId t) const;

private:
    const Mdp* m_;
    std::vector<WValuation> w_;
    Profile st_;
    mutable std::mutex mu_;
    mutable std::map<StateId, Profile> stueq_;
};

} // namespace pac
