import json
import os
from pathlib import Path

import pytest

import transfix

SCENARIOS = Path(os.environ.get("TRANSFIX_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def load(name):
    return json.loads((SCENARIOS / name).read_text())


def test_ordinal_arithmetic():
    w = transfix.Ordinal.omega()
    assert str(w + transfix.Ordinal(3)) == "w+3"
    assert str(transfix.Ordinal(3) + w) == "w"
    assert transfix.Ordinal.parse("w*2") < transfix.Ordinal.parse("w^2")
    assert str(transfix.Ordinal.parse("w+3").mul_by_omega()) == "w^2"
    assert transfix.Ordinal.parse("w*2").is_limit()
    with pytest.raises(transfix.ParseError):
        transfix.Ordinal.parse("1+w")


def test_lattice_fixed_points():
    lat = transfix.FiniteLattice.powerset(["a", "b"])
    a = lat.find('["a"]')
    ab = lat.find('["a","b"]')
    table = [lat.join(x, a) for x in range(len(lat))]
    assert transfix.lfp(lat, table) == (a, 1)
    assert transfix.gfp(lat, table)[0] == ab
    assert sorted(transfix.fixed_points(lat, table)) == sorted([a, ab])
    assert transfix.correspondence_ok(lat, table)
    with pytest.raises(transfix.PreconditionViolation):
        transfix.lfp(transfix.FiniteLattice.chain(2), [1, 0])


def test_run_and_verify():
    report = transfix.run(load("omega2.json"))
    assert report["verdict"] == {"status": "fixed", "theta": "w*2"}
    assert "theta = w*2" in transfix.format_text(report)
    assert transfix.verify(report) == (True, [])
    report["verdict"]["theta"] = "w+1"
    ok, problems = transfix.verify(report)
    assert not ok and problems


def test_kripke_and_games():
    liar = transfix.run(load("liar.json"))
    assert liar["trace"]["classification"]["L"] == "ungrounded"
    cx = transfix.enumerate_equilibria(load("continuity_counterexample.json"))
    assert cx["count"] == 2 and not cx["unique_outcome_sequence"]


def test_errors_and_determinism():
    with pytest.raises(transfix.ParseError, match="unknown scenario kind"):
        transfix.run({"kind": "bogus"})
    assert json.dumps(transfix.suite(3)) == json.dumps(transfix.suite(3))
    scenario = load("correspondence_ab.json")
    assert transfix.canonical(transfix.canonical(scenario)) == transfix.canonical(scenario)
