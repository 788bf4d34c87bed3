"""Compiled kernel against the pure-Python reference evaluator."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfl import direct_sum, make_cycle_rep, make_free_infinity_rep, make_standard_rep, parse_descriptor
from mfl.errors import KernelOverflow, StripDivergence
from mfl.functor import functor_extend, functor_nm, functor_restrict
from mfl.kernel import PythonEvaluator, Terms, get_evaluator, kernel_available, terms_agree
from mfl.kernel import batch, program
from mfl.kernel.batch import BatchFailure, CompiledEvaluator
from mfl.repcore import INF

from conftest import base_reps

needs_kernel = pytest.mark.skipif(not kernel_available(), reason="compiled kernel not built")


def _differential_reps() -> list:
    reps = []
    for m in (2, 3, 4):
        b = base_reps(m)
        reps += b + [direct_sum([b[0], b[3]]), direct_sum([b[4], b[6]])]
        for n in (2, 3, 5):
            for r in b + [direct_sum([b[1], b[5]])]:
                reps += [functor_nm(n, r), functor_restrict(m, r)]
    fr = make_free_infinity_rep()
    c3 = base_reps(3)[4]
    reps += [fr, functor_extend(3, fr), functor_restrict(3, functor_extend(3, fr)),
             functor_extend(2, functor_restrict(3, c3))]
    return reps


def _decoded(ev, t: Terms) -> Terms:
    labels = np.empty(len(t), dtype=object)
    for k in range(len(t)):
        labels[k] = ev.label_of(t.label[k]) if t.nonzero[k] else None
    return Terms(t.nonzero, t.phase, labels)


def _agree(pe, ce, tp, tc) -> bool:
    return bool(terms_agree(tp, _decoded(ce, tc), 1e-12).all())


@needs_kernel
@pytest.mark.parametrize("rep", _differential_reps(), ids=lambda r: r.descriptor)
def test_compiled_matches_reference(rep):
    labels = rep.labels(3)
    pe, ce = get_evaluator(rep, "python"), get_evaluator(rep, "compiled")
    Xp, Xc = pe.encode(labels), ce.encode(labels)
    for i in rep.generators(7):
        for adj in (False, True):
            assert _agree(pe, ce, pe.act(i, adj, Xp), ce.act(i, adj, Xc)), ("act", i, adj)
    for j in (1, 2, 5, 9):
        for adj in (False, True):
            assert _agree(pe, ce, pe.emb(j, adj, Xp), ce.emb(j, adj, Xc)), ("emb", j, adj)
    assert _agree(pe, ce, pe.Q(Xp), ce.Q(Xc))
    for a in (0, 1, 3):
        for adj in (False, True):
            assert _agree(pe, ce, pe.R(a, adj, Xp), ce.R(a, adj, Xc)), ("R", a, adj)
    if rep.arity != INF:
        for adj in (False, True):
            assert _agree(pe, ce, pe.U(adj, Xp), ce.U(adj, Xc)), ("U", adj)
    sp, sc = pe.strip(Xp), ce.strip(Xc)
    assert (sp[0] == sc[0]).all() and (sp[1] == sc[1]).all()
    dp, dc = pe.decode(Xp), ce.decode(Xc)
    assert (dp[0] == dc[0]).all()
    found = dp[0]
    assert (dp[1][found] == dc[1][found]).all()
    assert np.abs(dp[2][found] - dc[2][found]).max(initial=0) <= 1e-12
    assert all(dp[3][k] == ce.label_of(dc[3][k]) for k in np.nonzero(found)[0])


def _bound_reps() -> list:
    reps = []
    for m in (2, 3):
        b = [make_standard_rep(m)] + [make_cycle_rep(m, c, lam) for c in (1, m) for lam in (1, -1)]
        reps += b
        for n in (2, 3, 5):
            for r in b:
                reps += [functor_nm(n, r), functor_nm(m, functor_nm(n, r))]
    c3 = make_cycle_rep(3, 3, -1)
    return reps + [functor_restrict(3, c3), functor_extend(2, functor_restrict(3, c3))]


def _outcome(ev, fn, label):
    X = ev.encode([label])
    try:
        t = fn(ev, X)
    except BatchFailure as exc:
        return ("err", type(exc.cause).__name__)
    if hasattr(t, "nonzero"):
        return ("ok", bool(t.nonzero[0]), ev.label_of(t.label[0]) if t.nonzero[0] else None)
    return ("ok", int(t[0][0]), int(t[1][0]))


@needs_kernel
@pytest.mark.parametrize("bound", [2, 3, 4])
def test_strip_bound_semantics_agree(bound, monkeypatch):
    """Small bounds make divergence and tails interleave; both engines must agree label by label."""
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", str(bound))
    for rep in _bound_reps():
        top = rep.arity if rep.arity != INF else 4
        ops = [
            lambda e, X: e.act(top, True, X),
            lambda e, X: e.act(top, False, X),
            lambda e, X: e.Q(X) if e.arity != INF else e.act(2, False, X),
            lambda e, X: e.R(1, False, X) if e.arity != INF else e.act(1, True, X),
            lambda e, X: e.strip(X),
            lambda e, X: e.decode(X),
        ]
        pe, ce = PythonEvaluator(rep), CompiledEvaluator(rep, bound)
        for label in rep.labels(3):
            for fn in ops:
                assert _outcome(pe, fn, label) == _outcome(ce, fn, label), (rep.descriptor, label)


codec_labels = {
    "std:3": st.integers(0, 10**9),
    "cyc:3:2:-1": st.lists(st.sampled_from([1, 3]), max_size=8).map(tuple)
                  | st.lists(st.integers(1, 3), max_size=8).map(lambda w: tuple(w) + (1,)),
    "free:inf": st.lists(st.integers(1, 12), max_size=5).map(tuple),
}


@needs_kernel
@pytest.mark.parametrize("desc", sorted(codec_labels))
@given(data=st.data())
def test_codec_round_trip(desc, data):
    rep = parse_descriptor(desc)
    x = data.draw(codec_labels[desc])
    if not rep.is_label(x):
        return
    codec = program.compile_rep(rep).codec
    assert program.decode(codec, program.encode(codec, x)) == x


@needs_kernel
def test_sum_codec_round_trip():
    rep = direct_sum([make_standard_rep(2), make_cycle_rep(2, 2, 1j), make_standard_rep(2)])
    codec = program.compile_rep(rep).codec
    for x in rep.labels(4):
        assert program.decode(codec, program.encode(codec, x)) == x


def test_engine_selection(monkeypatch):
    rep = make_standard_rep(3)
    assert isinstance(get_evaluator(rep, "python"), PythonEvaluator)
    monkeypatch.setattr(batch, "_ckernel", None)
    assert isinstance(get_evaluator(make_standard_rep(3), "auto"), PythonEvaluator)
    with pytest.raises(program.NotCompilable):
        get_evaluator(make_standard_rep(3), "compiled")


@needs_kernel
def test_overflowing_labels_are_reported():
    ev = get_evaluator(make_standard_rep(5), "compiled")
    X = ev.encode([2**62])
    with pytest.raises(BatchFailure) as info:
        ev.act(5, False, X)
    assert isinstance(info.value.cause, KernelOverflow)
    with pytest.raises(KernelOverflow):
        get_evaluator(make_free_infinity_rep(), "compiled").encode([(64,)])


@needs_kernel
def test_divergence_is_reported(monkeypatch):
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", "3")
    ev = get_evaluator(make_standard_rep(2), "compiled")
    with pytest.raises(BatchFailure) as info:
        ev.Q(ev.encode([255]))
    assert isinstance(info.value.cause, StripDivergence)
