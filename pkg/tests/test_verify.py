from __future__ import annotations

import pytest

from mfl.errors import InternalConsistencyError
from mfl.verify import FAIL, FINDING, PASS, VACUOUS, SuiteConfig, run_suite, scenario_cuntz_states, summarize
from mfl.verify.core import CHECKS, Case, Check, Context, _run_case


def test_small_grid_passes():
    reports = run_suite(SuiteConfig(grid=(2, 3), depth=3))
    counts = summarize(reports)
    assert counts[FAIL] == 0 and counts[FINDING] == 0 and counts[PASS] > 0
    vac = {r.name for r in reports if r.status == VACUOUS}
    assert all(name.startswith("closedform.display.F43") or name.startswith("closedform.display.F34")
               for name in vac)


def test_reports_are_deterministic():
    cfg = SuiteConfig(grid=(2, 3), depth=3, suites=("functor", "seriesops"))
    a = [r.key() for r in run_suite(cfg)]
    b = [r.key() for r in run_suite(cfg)]
    assert a == b


def test_grid_subset_gives_subset_of_reports():
    suites = ("functor.closure", "functor.composition", "closedform.general")
    small = {r.key() for r in run_suite(SuiteConfig(grid=(2, 3), depth=3, suites=suites))}
    large = {r.key() for r in run_suite(SuiteConfig(grid=(2, 3, 4), depth=3, suites=suites))}
    assert small < large


def test_python_engine_gives_same_verdicts():
    cfg = dict(grid=(2, 3), depth=3, suites=("functor.closure", "functor.composition", "seriesops"))
    a = [r.key() for r in run_suite(SuiteConfig(kernel="python", **cfg))]
    b = [r.key() for r in run_suite(SuiteConfig(kernel="auto", **cfg))]
    assert a == b


def test_F43_display_is_a_finding_with_counterexample():
    reports = run_suite(SuiteConfig(grid=(3, 4), depth=3, suites=("closedform.display",)))
    f43 = [r for r in reports if r.name.startswith("closedform.display.F43.s4")]
    by_name = {}
    for r in f43:
        by_name.setdefault(r.name, set()).add(r.status)
    assert by_name["closedform.display.F43.s4.expanded"] == {FINDING}
    assert by_name["closedform.display.F43.s4.collected"] == {FINDING}
    assert by_name["closedform.display.F43.s4.corrected"] == {PASS}
    assert all(r.counterexample for r in f43 if r.status == FINDING)
    others = [r for r in reports if r not in f43]
    assert all(r.status in (PASS, VACUOUS) for r in others)
    assert any(r.name.startswith("closedform.display.F34") and r.status == PASS for r in others)


def test_empty_catalog_is_vacuous():
    reports = run_suite(SuiteConfig(catalog=(), grid=(2,), depth=2, suites=("functor.composition",)))
    assert [r.status for r in reports] == [VACUOUS]


def test_every_check_name_is_unique_and_anchored():
    run_suite(SuiteConfig(grid=(2,), depth=1, suites=("closedform.cases",)))
    names = [c.name for c in CHECKS]
    assert len(names) == len(set(names))
    assert all(c.anchor for c in CHECKS)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_scenario_passes(n):
    r = scenario_cuntz_states(n)
    assert r.status == PASS, r.counterexample


def test_scenario_degenerate_control():
    r = scenario_cuntz_states(2, lam2=1)
    assert r.status == PASS and "degenerate" in r.detail


def _case(body):
    return Case("std:2", "n=2", body)


def test_failures_carry_counterexamples():
    ctx = Context(SuiteConfig(grid=(2,), depth=2))
    chk = Check("demo.fail", "x", lambda c: iter(()))
    r = _run_case(ctx, chk, _case(lambda E: {"rep": "std:2", "label": {"int": 0}, "relation": "demo"}))
    assert r.status == FAIL and r.counterexample["relation"] == "demo"

    def boom(E):
        raise InternalConsistencyError("broken")
    r = _run_case(ctx, chk, _case(boom))
    assert r.status == FAIL and "InternalConsistencyError" in r.counterexample["error"]


def test_expected_finding_that_does_not_occur_fails():
    ctx = Context(SuiteConfig(grid=(2,), depth=2))
    chk = Check("demo.finding", "x", lambda c: iter(()), expect=FINDING)
    r = _run_case(ctx, chk, _case(lambda E: None))
    assert r.status == FAIL and "not observed" in r.detail
    r = _run_case(ctx, chk, _case(lambda E: {"rep": "std:2", "label": None, "relation": "demo"}))
    assert r.status == FINDING


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(depth=0)
    with pytest.raises(ValueError):
        SuiteConfig(tolerance=0)
    with pytest.raises(ValueError):
        SuiteConfig(grid=(1, 2))
