from __future__ import annotations

import pytest

from mfl import (
    INFINITE_TAIL,
    OMEGA,
    InRange,
    apply_embedded,
    apply_Q,
    apply_R,
    apply_U,
    make_cycle_rep,
    make_free_infinity_rep,
    make_standard_rep,
    strip_classify,
)
from mfl.errors import MFLError, SignatureMismatch, StripDivergence

from conftest import base_reps


def test_strip_examples():
    assert strip_classify(make_cycle_rep(2, 2, 1), OMEGA) is INFINITE_TAIL
    assert strip_classify(make_cycle_rep(3, 3, 1), (3, 1)) == InRange(3, 1, OMEGA)
    assert strip_classify(make_standard_rep(2), 0) == InRange(1, 1, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_strip_reconstructs_label(n):
    for rep in base_reps(n):
        for x in rep.labels(4):
            s = strip_classify(rep, x)
            if isinstance(s, InRange):
                ph, y = apply_embedded(rep, s.j, s.base)
                assert y == x and abs(s.phase * ph - 1) < 1e-12


def test_Q_extremes():
    std2 = make_standard_rep(2)
    assert all(apply_Q(std2, x) == (1, x) for x in std2.labels(5))
    for lam in (1, -1, 1j):
        c1 = make_cycle_rep(3, 1, lam)
        assert all(apply_Q(c1, x) == (1, x) for x in c1.labels(4))
    cn = make_cycle_rep(2, 2, -1)
    assert apply_Q(cn, OMEGA) is None
    assert apply_Q(cn, (1,)) == (1, (1,))


def test_R_examples():
    std2 = make_standard_rep(2)
    assert apply_R(std2, 1, 0) == (1, 1)
    assert apply_R(make_cycle_rep(2, 2, 1), 3, OMEGA) is None
    assert all(apply_R(std2, 0, x) == (1, x) for x in range(40))


def _R_by_series(rep, a, x, jmax):
    """Direct sum over j of f(t_{j+a}) f(t_j)* e_x."""
    hits = []
    for j in range(1, jmax + 1):
        t = apply_embedded(rep, j, x, adjoint=True)
        if t is None:
            continue
        u = apply_embedded(rep, j + a, t[1])
        hits.append((t[0] * u[0], u[1]))
    assert len(hits) <= 1
    return hits[0] if hits else None


@pytest.mark.parametrize("n", [2, 3])
def test_R_matches_term_by_term_series(n):
    for rep in base_reps(n):
        for x in rep.labels(4):
            for a in range(4):
                got = apply_R(rep, a, x)
                want = _R_by_series(rep, a, x, 4 * (n - 1) + n)
                if want is None:
                    assert got is None
                else:
                    assert got[1] == want[1] and abs(got[0] - want[0]) < 1e-12


def test_U_examples():
    ph, lab = apply_U(make_cycle_rep(2, 2, -1), OMEGA)
    assert lab == OMEGA and abs(ph + 1) < 1e-12
    std2 = make_standard_rep(2)
    assert all(apply_U(std2, x) is None for x in range(30))
    assert apply_U(make_cycle_rep(3, 3, 1), (1,)) is None
    with pytest.raises(SignatureMismatch):
        apply_U(make_free_infinity_rep(), OMEGA)


def test_U_adjoint_undoes_U():
    rep = make_cycle_rep(2, 2, 1j)
    for x in rep.labels(5):
        t = apply_U(rep, x)
        if t is not None:
            back = apply_U(rep, t[1], adjoint=True)
            assert back[1] == x and abs(back[0] * t[0] - 1) < 1e-12


def test_strip_bound_and_divergence(monkeypatch):
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", "3")
    std2 = make_standard_rep(2)
    with pytest.raises(StripDivergence):
        strip_classify(std2, 255)  # 255 = s_2^8 s_1 e_0 needs 8 backward steps
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", "10")
    assert strip_classify(std2, 255) == InRange(9, 1, 0)


def test_bad_strip_bound(monkeypatch):
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", "-2")
    with pytest.raises(MFLError):
        strip_classify(make_standard_rep(2), 3)


def test_R_rejects_negative_index():
    with pytest.raises(ValueError):
        apply_R(make_standard_rep(2), -1, 0)


def test_strip_rejects_foreign_label():
    from mfl.errors import InvalidLabel

    rep = make_standard_rep(2)
    for bad in ((1, 2), -1):
        with pytest.raises(InvalidLabel):
            strip_classify(rep, bad)
        with pytest.raises(InvalidLabel):
            apply_Q(rep, bad)
    with pytest.raises(InvalidLabel):
        apply_R(rep, 1, (3,), False)
