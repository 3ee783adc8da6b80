import os
from fractions import Fraction

import pytest

import pypac

DATA = os.environ.get("PAC_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))
EFFECT = "pos < 0.6 && halt"
PREDS = "vel >= 0.03; pos >= 0.6; pos >= 0.4; pos >= 0.3"


@pytest.fixture(scope="module")
def vehicle():
    return pypac.load_model(os.path.join(DATA, "vehicle.dtmc"))


def test_model_basics(vehicle):
    assert vehicle.size == 11
    assert len(vehicle) == 11
    assert vehicle.vars == ["pos", "vel", "act"]
    assert vehicle.initial == ["s0"]
    assert "halt" in vehicle.labels("s7")
    again = pypac.parse_model(vehicle.to_text())
    assert again.to_text() == vehicle.to_text()


def test_discover(vehicle):
    r = pypac.discover(vehicle, EFFECT)
    assert r["cause"] == ["s1"]
    assert r["p_aw"] == Fraction(69, 200)
    assert r["p_cw"] == Fraction(3, 20)
    assert r["predicate"] == "pos = 0.3 && vel = 0.01 && act = 1"


def test_check_and_oracle(vehicle):
    assert not pypac.check_cause(vehicle, EFFECT, ["s2"])["confirmed"]
    assert pypac.oracle_discover(vehicle, EFFECT)["cause"] == ["s1"]


def test_refine(vehicle):
    r = pypac.refine(vehicle, EFFECT, PREDS)
    assert r["report"]["abstract_cause"] == ["ŝ_1,1"]
    assert [t["outcome"] for t in r["trace"]] == ["none", "cause"]
    assert (r["trace"][0]["lo"], r["trace"][0]["hi"]) == (Fraction(1, 5), Fraction(9, 10))


def test_abstraction_and_subgraphs(vehicle):
    assert pypac.abstraction(vehicle, PREDS).splitlines()[1] == "ŝ_1: s1 s3 s4"
    wtrace = pypac.load_model(os.path.join(DATA, "wtrace.dtmc"))
    sigs = sorted(g["signature"] for g in pypac.subgraphs(wtrace, "w"))
    assert sigs == sorted(["(w,¬w)", "(w)", "(w,¬w,w,¬w)", "(w,¬w,w)"])


def test_smt_roundtrip(vehicle):
    text = pypac.export_smt(vehicle, EFFECT)
    assert text == pypac.export_smt(vehicle, EFFECT)
    assert "(set-logic QF_LRA)" in text
    assert pypac.decode_smt(vehicle, EFFECT, "unsat\n") is None
    r = pypac.decode_smt(vehicle, EFFECT, "sat\n((define-fun f_s1 () Bool true))\n")
    assert r["cause"] == ["s1"]
    with pytest.raises(pypac.DecodeError):
        pypac.decode_smt(vehicle, EFFECT, "sat\n((define-fun f_s7 () Bool true))\n")


def test_generate_and_errors():
    a = pypac.generate(3, 40)
    assert a.to_text() == pypac.generate(3, 40).to_text()
    assert a.size <= 40
    with pytest.raises(pypac.ValidationError):
        pypac.parse_model("vars x\nstate a 0\nstate b 1\ntrans a b 1/2\ninit a\n")
    with pytest.raises(pypac.SyntaxError):
        pypac.discover(a, "pos <")
