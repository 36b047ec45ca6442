import pytest

from lie_tools.verification import SUITES, SuiteResult, run_suite, run_suites
from utils.validation import ValidationError


@pytest.mark.parametrize("name", ["normalization", "schur", "matrix-identities", "lemma-exp", "separating-vector"])
def test_exact_suites_pass(name):
    result = run_suite(name)
    assert result.passed
    assert result.passed_count == len(result.items)
    assert result.elapsed >= 0


def test_small_monomial_table():
    result = run_suite("monomial-table", max_power=1)
    assert len(result.items) == 16
    assert result.passed


def test_randomized_suites_with_small_overrides():
    assert run_suite("oracle-triangle", expressions=3, max_degree=4).passed
    assert run_suite("sqrt-elimination", expressions=4, max_degree=3).passed
    assert run_suite("word-independence", expressions=3, max_degree=3).passed
    hull = run_suite("hull", spectra=12, max_points=5)
    assert hull.passed and len(hull.items) == 12


def test_monte_carlo_suite_shape():
    result = run_suite("monte-carlo", expressions=2, samples=4000)
    assert len(result.items) == 2
    assert result.required_passes == 2
    assert {"error", "std_error"} <= set(result.to_json()["items"][0])


def test_suite_result_tolerance():
    result = SuiteResult("demo", required_passes=1)
    result.add("ok", True)
    result.add("bad", False, reason="x")
    assert result.passed
    assert result.to_json()["items"][1] == {"name": "bad", "passed": False, "reason": "x"}
    assert not SuiteResult("strict", items=result.items).passed


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite("nothing")
    assert [r.suite for r in run_suites("schur")] == ["schur"]
    assert "separating-vector" in SUITES


def test_lemma_exp_suite_and_alias():
    result = run_suite("lemma-exp")
    assert result.suite == "lemma-exp"
    assert result.passed
    assert "lemma-exp" in SUITES
    assert run_suite("integral-exponents").suite == "lemma-exp"
