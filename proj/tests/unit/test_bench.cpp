#include "doctest.h"

#include "fixtures.hpp"
#include "pac/bench.hpp"
#include "pac/errors.hpp"
#include "pac/model_io.hpp"

using namespace pac;
using fixtures::ids;

TEST_CASE("genspec parsing")
{
    auto g = parse_genspec("# batch\nseed = 7\nbudget=120\nmax_depth=9\nkmin=2\nkmax=4\nstep=1/50\n"
                           "effect_rule = halt && pos < -0.05\nstrict=true\n");
    CHECK(g.seed == 7);
    CHECK(g.budget == 120);
    CHECK(g.max_depth == 9);
    CHECK(g.kmin == 2);
    CHECK(g.kmax == 4);
    CHECK(g.step == Rational(1, 50));
    CHECK(g.strict);
    CHECK(g.effect_rule.to_string() == "halt && pos < -0.05");
    CHECK_THROWS_AS(parse_genspec("colour=blue\n"), SyntaxError);
    CHECK_THROWS_AS(parse_genspec("seed\n"), SyntaxError);
    CHECK_THROWS_AS(parse_genspec("seed=x\n"), SyntaxError);
}

TEST_CASE("generation is seeded")
{
    GenSpec g;
    g.seed = 42;
    g.budget = 60;
    auto a = serialize_text(generate(g));
    auto b = serialize_text(generate(g));
    CHECK(a == b);
    g.seed = 43;
    CHECK(serialize_text(generate(g)) != a);
}

TEST_CASE("generated chains are valid and bounded")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GenSpec g;
        g.seed = seed;
        g.budget = 10 + seed;
        g.kmax = 1 + static_cast<int>(seed % 4);
        g.extra_vars = static_cast<int>(seed % 3);
        Dtmc m = generate(g);
        CHECK(m.size() <= g.budget);
        CHECK(m.initial() == StateSet{0});
        CHECK(m.vars().size() == 3 + static_cast<std::size_t>(g.extra_vars));
        for (const auto& st : m.states()) {
            bool halt = st.labels.count("halt") > 0;
            CHECK(halt == m.absorbing(m.find(st.name)));
            CHECK((st.labels.count("fail") > 0) == (halt && st.values[0] < 0));
        }
        // round trip through the text format
        CHECK(serialize_text(parse_model(serialize_text(m))) == serialize_text(m));
    }
}

TEST_CASE("strict budget")
{
    GenSpec g;
    g.budget = 5;
    g.kmin = 3;
    g.kmax = 3;
    g.strict = true;
    CHECK_THROWS_AS(generate(g), GuardExceeded);
    g.strict = false;
    CHECK(generate(g).size() <= 5);
}

TEST_CASE("oracle on the example")
{
    PacQuery q;
    q.model = &fixtures::vehicle();
    q.effect = parse_predicate("pos < 0.6 && halt");
    auto r = oracle_discover(q);
    REQUIRE(r);
    CHECK(r->cause == ids(*q.model, {"s1"}));
    CHECK(r->p_aw == Rational(69, 200));
    CHECK(r->p_cw == Rational(3, 20));
    CHECK_THROWS_AS(oracle_discover(q, 3), GuardExceeded);
}

TEST_CASE("oracle on a three-state chain")
{
    DtmcBuilder b({"x"});
    b.add_state("s0", {Rational(0)});
    b.add_state("s1", {Rational(1)});
    b.add_state("s2", {Rational(2)});
    b.add_edge(0, 1, Rational(1));
    b.add_edge(1, 2, Rational(1));
    b.close_leaves();
    Dtmc m = b.build();
    PacQuery q;
    q.model = &m;
    q.effect = parse_predicate("x = 2");
    auto r = oracle_discover(q);
    REQUIRE(r);
    CHECK(r->cause == StateSet{1});
    CHECK(r->p_aw == 1);
    CHECK(r->p_cw == 0);
}

TEST_CASE("small comparison batch")
{
    std::vector<GenSpec> specs(3);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        specs[i].seed = i + 1;
        specs[i].budget = 40;
    }
    BenchTemplate t;
    auto rep = compare(specs, t);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.agree);
        REQUIRE(row.improvement);
        CHECK(*row.improvement == doctest::Approx(100.0 * (1.0 - row.abstract_ms / row.concrete_ms)));
    }
    auto text = render_report(rep, false, false);
    CHECK(text.find("improvement") != std::string::npos);
    CHECK(text.find("seed=2") != std::string::npos);
    CHECK(render_report(rep, false, false) == render_report(compare(specs, t), false, false));
    auto rec = render_report(rep, true, true);
    CHECK(std::count(rec.begin(), rec.end(), '\n') == 3);
    CHECK(rec.find("\"improvement\":") != std::string::npos);
}
