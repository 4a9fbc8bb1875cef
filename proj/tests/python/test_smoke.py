"""Smoke tests for the python bindings: the worked instance stays positive
through parse, solve, translate and replay."""

import json
import pathlib

import pytest

vrhr = pytest.importorskip("vrhr")

SPECS = pathlib.Path(__file__).resolve().parents[2] / "specs"


@pytest.fixture(scope="module")
def knm_text():
    return (SPECS / "k_nm.spec").read_text()


def test_check_accepts_the_bundled_spec(knm_text):
    report = vrhr.check(knm_text)
    assert report["ok"], report["diagnostics"]


def test_check_reports_errors():
    report = vrhr.check("vr grammar G { axiom S; S -> vertex[nope]; }")
    assert not report["ok"]
    assert any("nope" in d for d in report["diagnostics"])


def test_prp_positive_with_replayable_witness(knm_text):
    verdict = vrhr.prp(knm_text, max_steps=6)
    assert verdict["status"] == "POSITIVE"
    witness = verdict["witness"]
    assert len(witness["system"]["vertices"]) == 3
    assert witness["valuation"] == {"x": 0, "y": 2}
    replayed = vrhr.replay(knm_text, json.dumps(verdict))
    assert replayed["verified"], replayed["diagnostics"]


def test_prp_negative_within_small_bounds(knm_text):
    verdict = vrhr.prp(knm_text, max_vertices=2)
    assert verdict["status"] == "NEGATIVE-up-to-bound"


def test_translate_then_solve_agrees(knm_text):
    routed = vrhr.translate(knm_text)
    assert vrhr.check(routed)["ok"]
    assert "eps_send" in routed and "half_Once" in routed
    verdict = vrhr.prp(routed)
    assert verdict["status"] == "POSITIVE"


def test_eval_and_dot(knm_text):
    graph = vrhr.eval_term(knm_text, "union(vertex[p], vertex[q])")
    assert len(graph["vertices"]) == 2
    assert graph["edges"] == []
    dot = vrhr.term_dot(knm_text, "vertex[p]")
    assert dot.startswith("digraph")


def test_enumerate_is_deterministic(knm_text):
    a = vrhr.enumerate_systems(knm_text, max_steps=4)
    b = vrhr.enumerate_systems(knm_text, max_steps=4)
    assert a == b
    assert a["exhausted"]
    assert len(a["items"]) >= 5


def test_equiv_suite_on_a_small_slice(knm_text):
    result = vrhr.equiv(knm_text, max_steps=4, max_vertices=3, max_len=4)
    assert result["all_passed"], result["instances"]


def test_equiv_random_terms(knm_text):
    result = vrhr.equiv_random(knm_text, count=20, seed=11)
    assert result["all_passed"], result["failures"]
