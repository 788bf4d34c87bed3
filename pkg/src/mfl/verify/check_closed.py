"""Checks on the closed-form presentations of F_{n,m}(pi)(s_j)."""

from __future__ import annotations

import numpy as np

from ..closedform import (
    CASE_I,
    CASE_IIA,
    CASE_IIB,
    DISPLAYS,
    Presentation,
    build_A,
    classify_case,
    closed_generator_apply,
    general_presentation,
)
from ..errors import InternalConsistencyError
from ..exprlang import monomials, parse
from ..functor import functor_nm
from ..kernel import Sparse, Terms, labels_equal, sparse_mismatch, then
from ..repcore import StandardRep, make_cycle_rep, make_standard_rep
from ..seriesops import max_strip_iters
from .check_rep import case, finite_catalog
from .core import FINDING, Context, Engine, arities_text, check


# -- batch evaluation of presentations -------------------------------------------------

def _power(ev, m: int, k: int, X: np.ndarray) -> Terms:
    t = Terms.basis(X)
    for _ in range(k):
        t = then(t, lambda L: ev.act(m, False, L))
    return t


def _series_sum(ev, series, X: np.ndarray) -> Sparse:
    """sum_l coef * r_m^{l+shift} B (r_m*)^l e_X, summed along each backward r_m-orbit.

    Rows are walked in lockstep with Brent checkpoints.  A row whose orbit
    returns to its checkpoint has entered a cycle of length lam; the series
    converges there only if none of the last lam levels contributed.
    """
    m = ev.arity
    words = monomials(series.inner)
    bound = max_strip_iters()
    size = len(X)
    rows = np.arange(size)
    cur = Terms.basis(X)
    mark = X.copy()
    mark_level = np.zeros(size, dtype=np.int64)
    last = np.full(size, -1, dtype=np.int64)
    power = 1
    parts = []
    level = 0
    while len(rows):
        if level > 0:
            back = labels_equal(cur.label, mark)
            if back.any():
                lam = level - mark_level[back]
                if (last[back] >= level - lam).any():
                    k = int(rows[back][np.argmax(last[back] >= level - lam)])
                    raise InternalConsistencyError(
                        f"series does not converge on row {k}: non-zero terms on a periodic r_{m}*-orbit")
                keep = ~back
                rows, cur, mark = rows[keep], _take(cur, keep), mark[keep]
                mark_level, last = mark_level[keep], last[keep]
                if not len(rows):
                    break
        if level > bound:
            raise InternalConsistencyError(f"r_{m}*-orbit exceeded {bound} steps")
        inner = ev.combination(words, cur.label)
        if len(inner.rows):
            pushed = _power(ev, m, level + series.shift, inner.labels)
            coef = series.coefficient * inner.coefs * cur.phase[inner.rows]
            parts.append(Sparse.from_terms(Terms(pushed.nonzero, pushed.phase * coef, pushed.label),
                                           rows[inner.rows]))
            last[np.unique(inner.rows)] = level
        if level == power - 1:
            mark = cur.label.copy()
            mark_level[:] = level
            power *= 2
        nxt = then(cur, lambda L: ev.act(m, True, L))
        alive = nxt.nonzero
        rows, cur, mark = rows[alive], _take(nxt, alive), mark[alive]
        mark_level, last = mark_level[alive], last[alive]
        level += 1
    return Sparse.concat(parts, X)


def _take(t: Terms, mask: np.ndarray) -> Terms:
    return Terms(t.nonzero[mask], t.phase[mask], t.label[mask])


def presentation_sum(ev, pres: Presentation, X: np.ndarray) -> Sparse:
    """Row-wise value of a presentation on e_X, merged but not reduced to a monomial."""
    if pres.head is not None:
        head = ev.combination(monomials(pres.head), X)
    else:
        head = Sparse.from_terms(_power(ev, pres.m, pres.head_power, X))
    parts = [head] + [_series_sum(ev, s, X) for s in pres.series]
    return Sparse.concat(parts, X).merged()


def closed_terms(ev, case, j: int, X: np.ndarray) -> tuple[Terms, np.ndarray]:
    """Closed-form F_{n,m}(pi)(s_j) on e_X plus the mask of non-monomial rows."""
    n, m = case.n, case.m
    if j < n:
        if case.tag == CASE_I:
            return ev.act(j, False, X), np.zeros(len(X), dtype=bool)
        l, r = divmod(j - 1, m - 1)
        t = ev.act(r + 1, False, X)
        for _ in range(l):
            t = then(t, lambda L: ev.act(m, False, L))
        return t, np.zeros(len(X), dtype=bool)
    return presentation_sum(ev, general_presentation(case), X).as_terms(len(X), X)


# -- checks ------------------------------------------------------------------------

_CASE_EXAMPLES = (
    ((3, 2), CASE_IIA, 2, None),
    ((2, 3), CASE_I, None, None),
    ((4, 3), CASE_IIB, 1, 2),
)


@check("closedform.cases", "n=(m-1)k_0+j_0")
def _cases(ctx: Context):
    rep = make_standard_rep(2)
    yield case(ctx, rep, "grid", lambda E: _cases_body(ctx))


def _cases_body(ctx: Context):
    for (n, m), tag, k0, j0 in _CASE_EXAMPLES:
        c = classify_case(n, m)
        if (c.tag, c.k0, c.j0) != (tag, k0, j0):
            return {"rep": "-", "label": None, "relation": f"classify_case({n},{m}) = {tag}, k0={k0}, j0={j0}",
                    "actual": [c.tag, c.k0, c.j0]}
    ns = sorted(set(ctx.config.grid) | set(range(2, 10)))
    for n in ns:
        for m in ns:
            c = classify_case(n, m)
            if c.tag == CASE_IIA and not (c.k0 >= 1 and n == (m - 1) * c.k0 + 1):
                return {"rep": "-", "label": None, "relation": f"II-a decomposition of ({n},{m})"}
            if c.tag == CASE_IIB and not (c.k0 >= 1 and 2 <= c.j0 <= m - 1 and n == (m - 1) * c.k0 + c.j0):
                return {"rep": "-", "label": None, "relation": f"II-b decomposition of ({n},{m})"}
            if m == 2 and (c.tag, c.k0) != (CASE_IIA, n - 1):
                return {"rep": "-", "label": None, "relation": f"m=2 gives II-a with k0=n-1 at n={n}"}
    printed = {
        (2, 3, None): "r2 r1' + r3 r1 r2'",
        (3, 4, None): "r3 r1' + r4 r1 r2' + r4 r2 r3'",
        (4, 3, 2): "r2 r1' + r3 r1 r2'",
    }
    for (n, m, j0), text in printed.items():
        if _words(build_A(n, m, j0)) != _words(parse(text)):
            return {"rep": "-", "label": None, "relation": f"A for (n,m,j0)=({n},{m},{j0}) is {text}"}
    examples = (
        ((3, 2), make_standard_rep(2), 3, 0, (1, 3)),
        ((3, 2), make_cycle_rep(2, 2, -1), 3, (), (-1, ())),
        ((2, 3), make_standard_rep(3), 1, 5, (1, 15)),
    )
    for (n, m), rep, j, x, want in examples:
        got = closed_generator_apply(classify_case(n, m), rep, j, x)
        if got is None or abs(got[0] - want[0]) > ctx.tol or got[1] != want[1]:
            return {"rep": rep.descriptor, "label": None,
                    "relation": f"closed form of F_{{{n},{m}}}(s_{j}) on e_{x!r}", "expected": repr(want),
                    "actual": repr(got)}
    return None


def _words(expr) -> dict:
    return {w: c for c, w in monomials(expr)}


@check("closedform.general", "\\pi(r_m)(I-Q_{\\pi})+\\pi(r_m)^{k_0}Q_{\\pi}")
def _general(ctx: Context):
    for m, rep in finite_catalog(ctx):
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n, m=m), lambda E, n=n, rep=rep: _general_body(E, n, rep))


def _general_body(E: Engine, n: int, rep):
    c = classify_case(n, rep.arity)
    ea, eb = E.pair(functor_nm(n, rep), rep)
    X = E.X(eb)
    for j in range(1, n + 1):
        got, multi = closed_terms(eb, c, j, X)
        if multi.any():
            k = int(np.argmax(multi))
            return E.counterexample(eb, X[k], f"closed form of s_{j} is monomial", j, False)
        cex = E.compare(eb, X, got, ea.act(j, False, X), f"closed form of F_{{{n},{rep.arity}}}(s_{j})", j,
                        False, ev_expected=ea)
        if cex:
            return cex
    return None


@check("closedform.polynomial", "F_{3,2}(\\pi)(r_3)=\\pi(s_2^2)")
def _polynomial(ctx: Context):
    for m, rep in finite_catalog(ctx):
        if not isinstance(rep, StandardRep):
            continue
        for n in ctx.config.grid:
            c = classify_case(n, m)
            if c.tag == CASE_IIA:
                yield case(ctx, rep, arities_text(n=n, m=m), lambda E, c=c, rep=rep: _polynomial_body(E, c, rep))


def _polynomial_body(E: Engine, c, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    got, multi = closed_terms(ev, c, c.n, X)
    if multi.any():
        k = int(np.argmax(multi))
        return E.counterexample(ev, X[k], "closed form is monomial", c.n, False)
    return E.compare(ev, X, got, _power(ev, c.m, c.k0, X), f"Q = I gives F(s_{c.n}) = r_{c.m}^{c.k0}", c.n)


def _display_check(display):
    expect = FINDING if display.expected == "finding" else "pass"

    @check(f"closedform.display.{display.name}", _display_anchor(display), expect=expect)
    def _fn(ctx: Context):
        if display.n not in ctx.config.grid or display.m not in ctx.config.grid:
            return
        for rep in ctx.catalog(display.m):
            yield case(ctx, rep, arities_text(n=display.n, m=display.m),
                       lambda E, rep=rep: _display_body(E, display, rep), detail=display.note)
    return _fn


def _display_anchor(display) -> str:
    if display.name.startswith("F43"):
        return "F_{4,3}(\\pi)(s_4)"
    return f"F_{{{display.n},{display.m}}}(\\pi)"


def _display_body(E: Engine, display, rep):
    ea, eb = E.pair(functor_nm(display.n, rep), rep)
    X = E.X(eb)
    got = presentation_sum(eb, display.presentation(), X)
    want = Sparse.from_terms(ea.act(display.generator, False, X))
    bad = sparse_mismatch(got, want, len(X), E.tol)
    if not bad.any():
        return None
    k = int(np.argmax(bad))
    return E.counterexample(eb, X[k], f"printed display {display.name} equals F_{{{display.n},{display.m}}}"
                                      f"(pi)(s_{display.generator})", display.generator, False,
                            expected=_sparse_json(ea, want, k), actual=_sparse_json(eb, got, k))


def _sparse_json(ev, s: Sparse, row: int):
    idx = np.nonzero(s.rows == row)[0]
    out = []
    for i in idx:
        c = complex(s.coefs[i])
        out.append({"coef": [c.real, c.imag], "label": _label_json(ev, s.labels[i])})
    return out


def _label_json(ev, code):
    from ..labels import label_to_json
    return label_to_json(ev.label_of(code))


for _d in DISPLAYS:
    _display_check(_d)
