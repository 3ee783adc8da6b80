#include "doctest.h"

#include "fixtures.hpp"
#include "pac/errors.hpp"
#include "pac/model_io.hpp"

using namespace pac;

namespace {

std::string invariant_of(const std::string& text)
{
    try {
        parse_model(text);
    } catch (const ValidationError& e) {
        return e.invariant();
    }
    return "";
}

} // namespace

TEST_CASE("example chain loads")
{
    const auto& m = fixtures::vehicle();
    CHECK(m.size() == 11);
    CHECK(m.initial() == StateSet{m.find("s0")});
    CHECK(m.vars() == std::vector<std::string>{"pos", "vel", "act"});
    CHECK(m.state(m.find("s1")).values[1] == Rational(1, 100));
    CHECK(m.depth(m.find("s4")) == 2);
    CHECK(m.rank(m.find("s0")) == 0);
}

TEST_CASE("absorbing singleton")
{
    auto m = parse_model("vars x\nstate a 1 labels: halt\ntrans a a 1\n");
    CHECK(m.size() == 1);
    CHECK(m.absorbing(0));
    CHECK(m.initial() == StateSet{0});
}

TEST_CASE("validation names the broken invariant")
{
    const std::string head = "vars x\nstate a 0 labels:\nstate b 0 labels: halt\n";
    CHECK(invariant_of(head + "trans a b 9/10\ntrans b b 1\n") == "row-stochastic");
    CHECK(invariant_of(head + "trans a b 1\n") == "row-stochastic");
    CHECK(invariant_of("vars x\nstate a 0 labels:\ntrans a a 1\n") == "halt-iff-absorbing");
    CHECK(invariant_of("vars x y\nstate a 0 labels: halt\ntrans a a 1\n") == "variable-arity");
    CHECK(invariant_of(head + "trans a c 1\ntrans b b 1\n") == "unknown-state");
    CHECK(invariant_of(head + "trans a b 3/2\ntrans b b 1\n") == "probability-range");
    CHECK(invariant_of("vars x\nstate a 0 labels:\nstate b 0 labels:\nstate c 0 labels: halt\n"
                       "trans a b 1/2\ntrans a c 1/2\ntrans b a 1/2\ntrans b c 1/2\ntrans c c 1\n")
          == "acyclic");
    CHECK(invariant_of("vars x\nstate a 0 labels: halt\nstate b 0 labels:\ntrans a a 1\ntrans b a 1/2\n"
                       "trans b b 1/2\n")
          == "absorbing-self-loop");
}

TEST_CASE("syntax errors carry line and column")
{
    try {
        parse_model("vars x\nstate a zz labels:\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 9);
    }
    CHECK_THROWS_AS(parse_model("vars x\nedge a b 1\n"), SyntaxError);
}

TEST_CASE("text and json round trip exactly")
{
    const auto& m = fixtures::vehicle();
    auto text = serialize_text(m);
    CHECK(serialize_text(parse_model(text)) == text);
    auto json = serialize_json(m);
    auto back = parse_model(json);
    CHECK(serialize_json(back) == json);
    CHECK(serialize_text(back) == text);
    CHECK(text.find("trans s0 s1 1/2") != std::string::npos);
}

TEST_CASE("json accepts numeric values")
{
    auto m = parse_model(R"({"vars":["x"],"states":[{"id":"a","values":[0.25],"labels":[]},)"
                         R"({"id":"b","values":["1/3"],"labels":["halt"]}],"trans":[["a","b",1],["b","b","1"]]})");
    CHECK(m.state(0).values[0] == Rational(1, 4));
    CHECK(m.initial() == StateSet{0});
}

TEST_CASE("mdp action progress")
{
    std::vector<State> states{{"u", {}, {}}, {"v", {}, {"halt"}}};
    std::vector<std::vector<Action>> ok{{Action{0, 0, false, {{1, Rational(1)}}}},
                                        {Action{1, 1, true, {{1, Rational(1)}}}}};
    CHECK_NOTHROW(Mdp(states, ok, {0}));
    std::vector<std::vector<Action>> bad{{Action{0, 5, false, {{1, Rational(1)}}}},
                                         {Action{1, 1, true, {{1, Rational(1)}}}}};
    try {
        Mdp(states, bad, {0});
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.invariant() == "action-progress");
    }
}
