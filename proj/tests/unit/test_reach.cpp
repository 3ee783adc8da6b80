#include "doctest.h"

#include "fixtures.hpp"
#include "paths.hpp"
#include "pac/reach.hpp"
#include "pac/stutter.hpp"

using namespace pac;
using fixtures::ids;

TEST_CASE("eventually on the example chain")
{
    const auto& m = fixtures::vehicle();
    auto E = ids(m, {"s7", "s9"});
    auto ev = prob_eventually(m, E);
    CHECK(ev[m.find("s1")] == Rational(69, 100));
    CHECK(ev[m.find("s7")] == 1);
    CHECK(ev[m.find("s10")] == 0);
    for (std::size_t s = 0; s < m.size(); ++s)
        CHECK(ev[s] == paths::eventually(m, static_cast<StateId>(s), E));
}

TEST_CASE("avoid-until")
{
    const auto& m = fixtures::vehicle();
    auto s0 = m.find("s0");
    CHECK(prob_avoid_until(m, ids(m, {"s7", "s9"}), ids(m, {"s1"}))[s0] == Rational(1, 2));
    StateSet all;
    for (std::size_t s = 0; s < m.size(); ++s)
        all.push_back(static_cast<StateId>(s));
    for (const auto& v : prob_avoid_until(m, {}, all))
        CHECK(v == 1);
    // s5 only reaches s9/s10, so B = {s1} with everything else avoided is 0 there
    StateSet rest;
    for (std::size_t s = 0; s < m.size(); ++s)
        if (static_cast<StateId>(s) != m.find("s1"))
            rest.push_back(static_cast<StateId>(s));
    CHECK(prob_avoid_until(m, rest, ids(m, {"s1"}))[m.find("s5")] == 0);
}

TEST_CASE("effect via cause and counterfactual")
{
    const auto& m = fixtures::vehicle();
    auto E = ids(m, {"s7", "s9"});
    auto s0 = m.find("s0");
    CHECK(prob_effect_via_cause(m, ids(m, {"s1"}), E)[s0] == Rational(69, 200));
    CHECK(prob_effect_via_cause(m, ids(m, {"s2"}), E)[s0] == Rational(3, 20));
    CHECK(prob_counterfactual(m, ids(m, {"s1"}), E)[s0] == Rational(3, 20));
    CHECK(prob_counterfactual(m, ids(m, {"s2"}), E)[s0] == Rational(69, 200));
    CHECK(prob_effect_via_cause(m, E, E)[m.find("s7")] == 1);
    CHECK(prob_counterfactual(m, {}, E) == prob_eventually(m, E));
    // literal root product differs from the compositional value
    CHECK(prob_effect_via_cause_product(m, ids(m, {"s1"}), E, s0) == Rational(1, 2) * Rational(99, 200));
}

TEST_CASE("profiles agree with path enumeration on every singleton cause")
{
    const auto& m = fixtures::vehicle();
    auto E = ids(m, {"s7", "s9"});
    for (std::size_t c = 0; c < m.size(); ++c) {
        StateSet C{static_cast<StateId>(c)};
        auto via = prob_effect_via_cause(m, C, E);
        auto cw = prob_counterfactual(m, C, E);
        auto ev = prob_eventually(m, E);
        for (std::size_t s = 0; s < m.size(); ++s) {
            if (std::binary_search(E.begin(), E.end(), static_cast<StateId>(c)))
                continue;
            CHECK(via[s] == paths::via(m, static_cast<StateId>(s), C, E));
            CHECK(cw[s] == paths::counterfactual(m, static_cast<StateId>(s), C, E));
            CHECK(via[s] <= ev[s]);
        }
    }
}

TEST_CASE("one action per state gives min = max = chain value")
{
    const auto& m = fixtures::vehicle();
    std::vector<State> states = m.states();
    std::vector<std::vector<Action>> actions(m.size());
    for (std::size_t s = 0; s < m.size(); ++s) {
        auto sid = static_cast<StateId>(s);
        auto row = m.successors(sid);
        actions[s].push_back(Action{sid, m.rank(sid), m.absorbing(sid), {row.begin(), row.end()}});
    }
    Mdp mdp(states, actions, m.initial());
    auto E = ids(m, {"s7", "s9"});
    auto iv = min_max_eventually(mdp, E);
    auto ev = prob_eventually(m, E);
    for (std::size_t s = 0; s < m.size(); ++s) {
        CHECK(iv[s].lo == ev[s]);
        CHECK(iv[s].hi == ev[s]);
    }
    auto C = ids(m, {"s1"});
    CHECK(min_effect_via_cause(mdp, C, E) == prob_effect_via_cause(m, C, E));
    CHECK(max_counterfactual(mdp, C, E) == prob_counterfactual(m, C, E));
}

TEST_CASE("stutter system with empty W")
{
    const auto& m = fixtures::vehicle();
    StutterSystem sys(m, {});
    for (std::size_t s = 0; s < m.size(); ++s) {
        for (std::size_t t = 0; t < m.size(); ++t) {
            CHECK(sys.eqw(static_cast<StateId>(s), static_cast<StateId>(t)));
            CHECK(sys.se_holds(static_cast<StateId>(s), static_cast<StateId>(t)));
        }
        CHECK(sys.st(static_cast<StateId>(s)) == 1);
    }
}
