from __future__ import annotations

import pytest

from mfl import OMEGA, build_A, classify_case, closed_generator_apply, make_cycle_rep, make_standard_rep
from mfl.closedform import CASE_I, CASE_IIA, CASE_IIB, DISPLAYS, display_apply
from mfl.errors import InvalidCase
from mfl.exprlang import monomials, parse
from mfl.functor import functor_nm

from conftest import base_reps


def words(e):
    return {w: c for c, w in monomials(e)}


def test_classify_examples():
    c = classify_case(3, 2)
    assert (c.tag, c.k0) == (CASE_IIA, 2)
    assert classify_case(2, 3).tag == CASE_I
    c = classify_case(4, 3)
    assert (c.tag, c.k0, c.j0) == (CASE_IIB, 1, 2)
    for n in range(2, 12):
        c = classify_case(n, 2)
        assert (c.tag, c.k0) == (CASE_IIA, n - 1)


def test_build_A_examples():
    assert words(build_A(2, 3)) == words(parse("r2 r1' + r3 r1 r2'"))
    assert words(build_A(3, 4)) == words(parse("r3 r1' + r4 r1 r2' + r4 r2 r3'"))
    assert words(build_A(4, 3, 2)) == words(parse("r2 r1' + r3 r1 r2'"))
    with pytest.raises(InvalidCase):
        build_A(4, 3)


def test_closed_generator_examples():
    assert closed_generator_apply(classify_case(3, 2), make_standard_rep(2), 3, 0) == (1, 3)
    ph, lab = closed_generator_apply(classify_case(3, 2), make_cycle_rep(2, 2, -1), 3, OMEGA)
    assert lab == OMEGA and abs(ph + 1) < 1e-12
    assert closed_generator_apply(classify_case(2, 3), make_standard_rep(3), 1, 5) == (1, 15)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (4, 3), (3, 4), (5, 3), (2, 4)])
def test_closed_form_matches_functor(n, m):
    case = classify_case(n, m)
    for rep in base_reps(m):
        img = functor_nm(n, rep)
        for x in rep.labels(3):
            for j in range(1, n + 1):
                got, want = closed_generator_apply(case, rep, j, x), img.apply(j, x)
                assert (got is None) == (want is None)
                if got is not None:
                    assert got[1] == want[1] and abs(got[0] - want[0]) < 1e-9


def _display(name):
    return next(d for d in DISPLAYS if d.name == name)


def test_F43_printed_display_is_off_by_one_power():
    """The printed series carries r3^(k+2); the corrected display with r3^(k+1) matches."""
    rep = make_cycle_rep(3, 3, -1)
    img = functor_nm(4, rep)
    printed, corrected = _display("F43.s4.expanded"), _display("F43.s4.corrected")
    mismatches = 0
    for x in rep.labels(4):
        want = img.apply(4, x)
        got = display_apply(corrected, rep, x)
        assert got.as_term() == want or abs(got.as_term()[0] - want[0]) < 1e-9
        if display_apply(printed, rep, x).as_term() != want:
            mismatches += 1
    assert mismatches > 0


@pytest.mark.parametrize("name", ["F23.s2.expanded", "F32.r3.collected", "F34.r3.expanded"])
def test_matching_displays(name):
    d = _display(name)
    for rep in base_reps(d.m):
        img = functor_nm(d.n, rep)
        for x in rep.labels(3):
            got, want = display_apply(d, rep, x).as_term(), img.apply(d.generator, x)
            assert (got is None) == (want is None)
            if got is not None:
                assert got[1] == want[1] and abs(got[0] - want[0]) < 1e-9
