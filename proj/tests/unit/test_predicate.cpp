#include "doctest.h"

#include "fixtures.hpp"
#include "pac/errors.hpp"
#include "pac/predicate.hpp"

using namespace pac;

TEST_CASE("parser handles precedence and negation")
{
    auto p = parse_predicate("!(vel >= 3/100) || pos < 0.6 && halt");
    CHECK(p.kind() == Predicate::Kind::Or);
    CHECK(p.to_string() == "!(vel >= 0.03) || pos < 0.6 && halt");
    CHECK(parse_predicate("true").kind() == Predicate::Kind::True);
    CHECK(parse_predicate("0.3 <= pos").to_string() == "pos >= 0.3");
}

TEST_CASE("syntax errors carry a column")
{
    try {
        parse_predicate("pos < ");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse_predicate("pos <> 1"), SyntaxError);
    CHECK_THROWS_AS(parse_predicate("(pos < 1"), SyntaxError);
}

TEST_CASE("effect predicate on the example states")
{
    const auto& m = fixtures::vehicle();
    auto fail = parse_predicate("pos < 0.6 && halt");
    CHECK(eval_predicate(fail, m, m.find("s7")));
    CHECK_FALSE(eval_predicate(fail, m, m.find("s10")));
    CHECK(eval_predicate(Predicate(), m, m.find("s3")));
    CHECK(satisfying_set(fail, m) == fixtures::ids(m, {"s7", "s9"}));
    CHECK(satisfying_set(Predicate::constant(false), m).empty());
}

TEST_CASE("halt satisfying set matches the absorbing states")
{
    const auto& m = fixtures::vehicle();
    StateSet absorbing;
    for (std::size_t s = 0; s < m.size(); ++s)
        if (m.absorbing(static_cast<StateId>(s)))
            absorbing.push_back(static_cast<StateId>(s));
    CHECK(satisfying_set(parse_predicate("halt"), m) == absorbing);
    CHECK(absorbing == fixtures::ids(m, {"s6", "s7", "s8", "s9", "s10"}));
}

TEST_CASE("unbound names are reported")
{
    const auto& m = fixtures::vehicle();
    CHECK_THROWS_AS(satisfying_set(parse_predicate("speed > 1"), m), UnboundVariable);
}

TEST_CASE("scaling constants")
{
    auto p = parse_predicate("pos >= 0.3 && vel < 1/100");
    CHECK(p.scaled(Rational(10)).to_string() == "pos >= 3 && vel < 0.1");
    CHECK(p.names() == std::set<std::string>{"pos", "vel"});
}
