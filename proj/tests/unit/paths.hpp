#pragma once

// Brute-force path enumeration used as an independent oracle in tests.

#include "pac/model.hpp"

#include <algorithm>

#include <functional>
#include <vector>

namespace paths {

struct Path {
    std::vector<pac::StateId> states;
    pac::Rational prob;
};

inline void enumerate(const pac::Dtmc& m, pac::StateId from, const std::function<void(const Path&)>& visit)
{
    Path p{{from}, pac::Rational(1)};
    std::function<void()> go = [&] {
        pac::StateId s = p.states.back();
        if (m.absorbing(s) || m.successors(s).empty()) {
            visit(p);
            return;
        }
        for (const auto& t : m.successors(s)) {
            pac::Rational saved = p.prob;
            p.prob *= t.prob;
            p.states.push_back(t.target);
            go();
            p.states.pop_back();
            p.prob = saved;
        }
    };
    go();
}

inline bool in(const pac::StateSet& set, pac::StateId s)
{
    return std::find(set.begin(), set.end(), s) != set.end();
}

inline pac::Rational eventually(const pac::Dtmc& m, pac::StateId from, const pac::StateSet& E)
{
    pac::Rational acc = 0;
    enumerate(m, from, [&](const Path& p) {
        for (auto s : p.states)
            if (in(E, s)) {
                acc += p.prob;
                return;
            }
    });
    return acc;
}

// Path visits C before any E state and reaches E afterwards.
inline pac::Rational via(const pac::Dtmc& m, pac::StateId from, const pac::StateSet& C, const pac::StateSet& E)
{
    pac::Rational acc = 0;
    enumerate(m, from, [&](const Path& p) {
        for (std::size_t i = 0; i < p.states.size(); ++i) {
            if (in(C, p.states[i])) {
                for (std::size_t j = i; j < p.states.size(); ++j)
                    if (in(E, p.states[j])) {
                        acc += p.prob;
                        return;
                    }
                return;
            }
            if (in(E, p.states[i]))
                return;
        }
    });
    return acc;
}

// Path reaches E before touching C.
inline pac::Rational counterfactual(const pac::Dtmc& m, pac::StateId from, const pac::StateSet& C,
                                    const pac::StateSet& E)
{
    pac::Rational acc = 0;
    enumerate(m, from, [&](const Path& p) {
        for (auto s : p.states) {
            if (in(E, s)) {
                acc += p.prob;
                return;
            }
            if (in(C, s))
                return;
        }
    });
    return acc;
}

} // namespace paths
