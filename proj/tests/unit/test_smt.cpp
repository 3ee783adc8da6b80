#include "doctest.h"

#include "fixtures.hpp"
#include "pac/abstraction.hpp"
#include "pac/smt.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

using namespace pac;
using fixtures::ids;

namespace {

PacQuery vehicle_query()
{
    PacQuery q;
    q.model = &fixtures::vehicle();
    q.effect = parse_predicate("pos < 0.6 && halt");
    return q;
}

AbstractPacQuery vehicle_abs_query()
{
    AbstractPacQuery q;
    q.model = &fixtures::vehicle();
    q.effect = parse_predicate("pos < 0.6 && halt");
    return q;
}

Abstraction coarse()
{
    return abstract(fixtures::vehicle(), parse_predicate_list("vel >= 0.03; pos >= 0.6; pos >= 0.4; pos >= 0.3"));
}

Abstraction split()
{
    const auto& m = fixtures::vehicle();
    auto a = coarse();
    auto ev = prob_eventually(m, ids(m, {"s7", "s9"}));
    return refine_split(a, a.find("ŝ_1"), Rational(3, 5), ev);
}

// Runs the external solver; empty when it is not available.
std::string solve(const std::string& text)
{
#ifdef PAC_Z3
    std::string path = std::string(PAC_TEST_TMP) + "/instance.smt2";
    std::ofstream(path) << text;
    std::string cmd = std::string(PAC_Z3) + " " + path;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe.get()))
        out.append(buf.data(), n);
    return out;
#else
    (void)text;
    return {};
#endif
}

} // namespace

TEST_CASE("real literals")
{
    CHECK(smt_real(Rational(3)) == "3.0");
    CHECK(smt_real(Rational(0)) == "0.0");
    CHECK(smt_real(Rational(69, 200)) == "(/ 69.0 200.0)");
    CHECK(smt_real(Rational(2, 4)) == "(/ 1.0 2.0)");
    CHECK(smt_real(Rational(-1, 3)) == "(/ (- 1.0) 3.0)");
}

TEST_CASE("concrete export is deterministic and pruned")
{
    auto q = vehicle_query();
    auto a = export_smt(q);
    auto b = export_smt(q);
    CHECK(a.text == b.text);
    CHECK(a.text.find("(set-logic QF_LRA)") != std::string::npos);
    CHECK(a.text.find("; s7 : s7") != std::string::npos);
    CHECK(a.text.find("(assert (not f_s0))") != std::string::npos); // root
    CHECK(a.text.find("(assert (not f_s7))") != std::string::npos); // effect
    CHECK(a.text.find("(assert (not f_s10))") != std::string::npos); // zero reach
    CHECK(a.text.find("(assert (not f_s1))") == std::string::npos);
    CHECK(a.text.find("ok_c0") != std::string::npos);
    CHECK(export_smt(q, false).text.find("ok_c0") == std::string::npos);
}

TEST_CASE("decoding solver answers")
{
    auto q = vehicle_query();
    CHECK_FALSE(decode_smt_model(q, "unsat\n(error \"model is not available\")\n"));

    auto r = decode_smt_model(q, "sat\n(\n  (define-fun f_s1 () Bool\n    true)\n  (define-fun f_s2 () Bool false)\n"
                                 "  (define-fun pAW_s0 () Real (/ 69.0 200.0))\n)\n");
    REQUIRE(r);
    CHECK(r->cause == ids(*q.model, {"s1"}));
    CHECK(r->p_aw == Rational(69, 200));
    CHECK(r->p_cw == Rational(3, 20));

    CHECK_THROWS_AS(decode_smt_model(q, "sat\n((define-fun f_s7 () Bool true))\n"), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, "sat\n((define-fun f_s2 () Bool true))\n"), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, "sat\n((define-fun f_s1 () Bool false))\n"), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, "sat\n((define-fun f_s1 () Bool true)\n"), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, "banana"), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, ""), DecodeError);
    CHECK_THROWS_AS(decode_smt_model(q, "sat\n((define-fun f_s99 () Bool true))\n"), DecodeError);
}

TEST_CASE("abstract export is deterministic")
{
    auto q = vehicle_abs_query();
    auto a = coarse();
    CHECK(export_smt_abs(a, q).text == export_smt_abs(a, q).text);
    auto text = export_smt_abs(a, q).text;
    CHECK(text.find("pAWABS_min_s") != std::string::npos);
    CHECK(text.find("pCWABS_max_s") != std::string::npos);
    CHECK(text.find("; s1 : ŝ_1") != std::string::npos);
}

TEST_CASE("abstract decoding post-verifies")
{
    auto q = vehicle_abs_query();
    auto b = split();
    std::string f = "f_s" + std::to_string(b.find("ŝ_1,1"));
    auto r = decode_smt_model_abs(b, q, "sat\n((define-fun " + f + " () Bool true))\n");
    REQUIRE(r);
    CHECK(r->abstract_cause == std::vector<std::string>{"ŝ_1,1"});
    CHECK(r->p_aw == Rational(69, 200));
    CHECK_FALSE(decode_smt_model_abs(b, q, "unsat\n"));
    auto a = coarse();
    std::string g = "f_s" + std::to_string(a.find("ŝ_1"));
    CHECK_THROWS_AS(decode_smt_model_abs(a, q, "sat\n((define-fun " + g + " () Bool true))\n"), DecodeError);
}

#ifdef PAC_Z3
TEST_CASE("external solver selects s1")
{
    auto q = vehicle_query();
    auto out = solve(export_smt(q).text);
    REQUIRE(out.rfind("sat", 0) == 0);
    auto r = decode_smt_model(q, out);
    REQUIRE(r);
    CHECK(r->cause == ids(*q.model, {"s1"}));
    CHECK(r->p_aw == Rational(69, 200));
    CHECK(r->p_cw == Rational(3, 20));
}

TEST_CASE("external solver on a chain without a cause")
{
    DtmcBuilder b({"x"});
    b.add_state("s0", {Rational(0)});
    b.add_state("s1", {Rational(1)});
    b.add_edge(0, 1, Rational(1));
    b.close_leaves();
    Dtmc m = b.build();
    PacQuery q;
    q.model = &m;
    q.effect = parse_predicate("halt");
    auto out = solve(export_smt(q).text);
    CHECK(out.rfind("unsat", 0) == 0);
    CHECK_FALSE(decode_smt_model(q, out));
}

TEST_CASE("external solver on the abstractions")
{
    auto q = vehicle_abs_query();
    auto a = coarse();
    auto out = solve(export_smt_abs(a, q).text);
    CHECK(out.rfind("unsat", 0) == 0);

    auto b = split();
    out = solve(export_smt_abs(b, q).text);
    REQUIRE(out.rfind("sat", 0) == 0);
    auto r = decode_smt_model_abs(b, q, out);
    REQUIRE(r);
    CHECK(r->abstract_cause == std::vector<std::string>{"ŝ_1,1"});
    CHECK(r->p_aw == Rational(69, 200));
    CHECK(r->p_cw == Rational(3, 20));
}

TEST_CASE("finest abstraction export agrees with the concrete one")
{
    auto pq = vehicle_query();
    auto q = vehicle_abs_query();
    auto fine = abstract(fixtures::vehicle(), parse_predicate_list("pos >= 0.1; pos >= 0.35; pos >= 0.38; pos >= 0.4;"
                                                                "pos >= 0.45; pos >= 0.5; pos >= 0.52; pos >= 0.6;"
                                                                "pos >= 0.61; pos >= 0.62"));
    auto out = solve(export_smt_abs(fine, q).text);
    REQUIRE(out.rfind("sat", 0) == 0);
    auto r = decode_smt_model_abs(fine, q, out);
    REQUIRE(r);
    CHECK(r->cause == ids(fixtures::vehicle(), {"s1"}));
}
#endif
