"""Checks on Q, R_a and U, including an independent summation oracle for R_a."""

from __future__ import annotations

import numpy as np

from ..exprlang import monomials, parse
from ..kernel import Sparse, Terms, sparse_mismatch, split_sum, then, wrap_terms
from ..repcore import CycleRep, DirectSumRep, StandardRep
from .check_rep import case, finite_catalog, zeros
from .core import Context, Engine, arities_text, check

AMAX = 3
JMAX = 10


def _series_case(ctx: Context, body):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: body(E, rep))


@check("seriesops.R_additive", "R_{\\pi,a}R_{\\pi,b}=R_{\\pi,a+b}")
def _r_additive(ctx: Context):
    yield from _series_case(ctx, _r_additive_body)


def _r_additive_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    R = {a: ev.R(a, False, X) for a in range(2 * AMAX + 1)}
    for b in range(AMAX + 1):
        for a in range(AMAX + 1):
            lhs = then(R[b], lambda L, a=a: ev.R(a, False, L))
            cex = E.compare(ev, X, lhs, R[a + b], f"R_{a} R_{b} = R_{a + b}")
            if cex:
                return cex
    return None


@check("seriesops.R_isometry", "R_{\\pi,a}^*R_{\\pi,a}=Q_{\\pi}")
def _r_isometry(ctx: Context):
    yield from _series_case(ctx, _r_isometry_body)


def _r_isometry_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    Q = ev.Q(X)
    kind, j, _, _ = ev.strip(X)
    for a in range(AMAX + 1):
        lhs = then(ev.R(a, False, X), lambda L, a=a: ev.R(a, True, L))
        cex = E.compare(ev, X, lhs, Q, f"R_{a}* R_{a} = Q")
        if cex:
            return cex
        # R_a R_a* = sum_{j > a} f(t_j t_j*): identity exactly on labels stripped to j >= a+1
        lhs = then(ev.R(a, True, X), lambda L, a=a: ev.R(a, False, L))
        keep = (kind == 1) & (j >= a + 1)
        cex = E.compare(ev, X, lhs, _masked(X, keep), f"R_{a} R_{a}* = sum_(j>{a}) f(t_j t_j*)")
        if cex:
            return cex
    return None


def _masked(X: np.ndarray, keep: np.ndarray) -> Terms:
    t = Terms.basis(X)
    return Terms(keep.copy(), np.where(keep, 1, 0).astype(np.complex128), t.label)


@check("seriesops.Q_absorbs", "Q_{\\pi}R_{\\pi,a}=R_{\\pi,a}=R_{\\pi,a}Q_{\\pi}")
def _q_absorbs(ctx: Context):
    yield from _series_case(ctx, _q_absorbs_body)


def _q_absorbs_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    Q = ev.Q(X)
    for a in range(AMAX + 1):
        R = ev.R(a, False, X)
        cex = E.compare(ev, X, then(R, ev.Q), R, f"Q R_{a} = R_{a}")
        if cex:
            return cex
        cex = E.compare(ev, X, then(Q, lambda L, a=a: ev.R(a, False, L)), R, f"R_{a} Q = R_{a}")
        if cex:
            return cex
    return None


@check("seriesops.Q_diagonal", "Q_{\\pi}:=R_{\\pi,0}")
def _q_diagonal(ctx: Context):
    yield from _series_case(ctx, _q_diagonal_body)


def _q_diagonal_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    Q = ev.Q(X)
    cex = E.compare(ev, X, Q, _masked(X, Q.nonzero), "Q e_x in {0, e_x}")
    if cex:
        return cex
    cex = E.compare(ev, X, then(Q, ev.Q), Q, "Q Q = Q")
    if cex:
        return cex
    return E.compare(ev, X, ev.R(0, False, X), Q, "R_0 = Q")


@check("seriesops.R_shift", "R_{\\pi,a}\\pi(f_{n,\\infty}(t_{j}))=\\pi(f_{n,\\infty}(t_{j+a}))")
def _r_shift(ctx: Context):
    yield from _series_case(ctx, _r_shift_body)


def _r_shift_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    for j in range(1, JMAX + 1):
        f = ev.emb(j, False, X)
        cex = E.compare(ev, X, then(f, ev.Q), f, f"Q f(t_{j}) = f(t_{j})", j)
        if cex:
            return cex
        for a in range(AMAX + 1):
            lhs = then(f, lambda L, a=a: ev.R(a, False, L))
            cex = E.compare(ev, X, lhs, ev.emb(j + a, False, X), f"R_{a} f(t_{j}) = f(t_{j + a})", j)
            if cex:
                return cex
    return None


@check("seriesops.R_adjoint", "\\pi(f_{n,\\infty}(t_j))^*R_{\\pi,a}")
def _r_adjoint(ctx: Context):
    yield from _series_case(ctx, _r_adjoint_body)


def _r_adjoint_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    for a in range(AMAX + 1):
        R = ev.R(a, False, X)
        for j in range(1, JMAX + 1):
            lhs = then(R, lambda L, j=j: ev.emb(j, True, L))
            want = ev.emb(j - a, True, X) if j >= a + 1 else zeros(X)
            cex = E.compare(ev, X, lhs, want, f"f(t_{j})* R_{a}", j, True)
            if cex:
                return cex
    return None


@check("seriesops.sn_R", "\\pi(s_n)Q_{\\pi}=R_{\\pi,n-1}")
def _sn_r(ctx: Context):
    yield from _series_case(ctx, _sn_r_body)


def _sn_r_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    n = rep.arity
    sn = lambda L: ev.act(n, False, L)  # noqa: E731
    cex = E.compare(ev, X, then(ev.Q(X), sn), ev.R(n - 1, False, X), f"s_n Q = R_{n - 1}")
    if cex:
        return cex
    for a in range(AMAX + 1):
        cex = E.compare(ev, X, then(ev.R(a, False, X), sn), ev.R(a + n - 1, False, X),
                        f"s_n R_{a} = R_{a + n - 1}")
        if cex:
            return cex
    return None


@check("seriesops.R_blockwise", "R_{\\pi,a}=\\sum_{\\lambda}R_{\\pi_{\\lambda},a}")
def _r_blockwise(ctx: Context):
    for n in ctx.config.grid:
        for rep in ctx.sum_catalog(n):
            yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _r_blockwise_body(E, rep))


def blockwise_violation(E: Engine, total, parts, op, relation: str):
    """Compare ``op(ev_total)`` with the block-diagonal assembly of ``op(ev_part)``."""
    ev = E.ev(total)
    evs = [E.ev(p) for p in parts]
    if not all(e.compiled == ev.compiled for e in evs):
        ev = E.python(total)
        evs = [E.python(p) for p in parts]
    X = E.X(ev)
    K = len(parts)
    branch, inner = split_sum(X, K)
    got = op(ev, X)
    want = Terms.empty_like(X, len(X))
    for b, pev in enumerate(evs):
        rows = np.nonzero(branch == b)[0]
        if not len(rows):
            continue
        t = wrap_terms(b, op(pev, inner[rows]), K)
        want.nonzero[rows] = t.nonzero
        want.phase[rows] = t.phase
        want.label[rows] = t.label
    return E.compare(ev, X, got, want, relation)


def _r_blockwise_body(E: Engine, rep: DirectSumRep):
    for a in range(AMAX + 1):
        for adj in (False, True):
            cex = blockwise_violation(E, rep, rep.parts, lambda e, L, a=a, adj=adj: e.R(a, adj, L),
                                      f"R_{a}{'*' if adj else ''} acts blockwise")
            if cex:
                return cex
    cex = blockwise_violation(E, rep, rep.parts, lambda e, L: e.Q(L), "Q acts blockwise")
    return cex


# -- independent oracle ------------------------------------------------------------

def backward_depths(ev, X: np.ndarray, n: int, bound: int) -> np.ndarray:
    """Number of s_n* steps before each label leaves range(s_n); -1 on periodic orbits.

    Walks all rows in lockstep with Brent-style checkpoints, never calling the
    strip analysis.
    """
    depth = np.full(len(X), -1, dtype=np.int64)
    rows = np.arange(len(X))
    cur = X
    mark = X.copy()
    power, lam, steps = 1, 0, 0
    while len(rows):
        t = ev.act(n, True, cur)
        done = ~t.nonzero
        depth[rows[done]] = steps
        keep = t.nonzero
        rows, cur, mark = rows[keep], t.label[keep], mark[keep]
        steps += 1
        lam += 1
        if len(rows):
            same = cur == mark if cur.dtype != object else np.array([a == b for a, b in zip(cur, mark)], dtype=bool)
            rows, cur, mark = rows[~same], cur[~same], mark[~same]
        if lam == power:
            mark = cur.copy()
            power *= 2
            lam = 0
        if steps > 4 * bound:
            raise RuntimeError("backward orbit walk did not settle")
    return depth


def series_oracle(ev, X: np.ndarray, a: int, adjoint: bool, jmax: int):
    """sum_{j<=jmax} f(t_{j+a}) f(t_j)* (or its adjoint) term by term, plus summand counts."""
    parts = []
    count = np.zeros(len(X), dtype=np.int64)
    for j in range(1, jmax + 1):
        if adjoint:
            first, second = j + a, j
        else:
            first, second = j, j + a
        t = ev.emb(first, True, X)
        count += t.nonzero
        t = then(t, lambda L, s=second: ev.emb(s, False, L))
        parts.append(Sparse.from_terms(t))
    return Sparse.concat(parts, X).merged(), count


@check("seriesops.R_oracle", "R_{\\pi,a}:=\\sum_{j=1}^{\\infty}\\pi(f_{n,\\infty}(t_{j+a}\\,t_j^*))")
def _r_oracle(ctx: Context):
    yield from _series_case(ctx, _r_oracle_body)


def _r_oracle_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    n = rep.arity
    depth = backward_depths(ev, X, n, 10_000)
    dmax = int(depth.max()) if len(depth) else 0
    jmax = (n - 1) * (dmax + 1)
    for a in range(AMAX + 1):
        for adj in (False, True):
            want, count = series_oracle(ev, X, a, adj, jmax + (a if adj else 0))
            if not adj and (count > 1).any():
                k = int(np.argmax(count > 1))
                return E.counterexample(ev, X[k], "at most one summand f(t_j) f(t_j)* is non-zero",
                                        actual=int(count[k]))
            got = Sparse.from_terms(ev.R(a, adj, X))
            bad = sparse_mismatch(got, want, len(X), E.tol)
            if bad.any():
                k = int(np.argmax(bad))
                return E.counterexample(ev, X[k], f"R_{a}{'*' if adj else ''} equals its termwise sum "
                                        f"over j <= {jmax}", adjoint=adj)
    return None


# -- U -------------------------------------------------------------------------------

@check("seriesops.U_partial_isometry", "U_{\\pi}:=\\pi(s_n)(I-Q_{\\pi})")
def _u_partial(ctx: Context):
    yield from _series_case(ctx, _u_partial_body)


def _u_partial_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    Q = ev.Q(X)
    comp = _masked(X, ~Q.nonzero)
    U = ev.U(False, X)
    cex = E.compare(ev, X, then(U, lambda L: ev.U(True, L)), comp, "U* U = I - Q")
    if cex:
        return cex
    cex = E.compare(ev, X, then(ev.U(True, X), lambda L: ev.U(False, L)), comp, "U U* = I - Q")
    if cex:
        return cex
    for a in range(AMAX + 1):
        lhs = then(ev.R(a, False, X), lambda L: ev.U(True, L))
        cex = E.compare(ev, X, lhs, zeros(X), f"U* R_{a} = 0")
        if cex:
            return cex
    return None


@check("seriesops.U_unitary_sum", "(U_{\\pi}+R_{\\pi,a})^*(U_{\\pi}+R_{\\pi,a})=I")
def _u_sum(ctx: Context):
    yield from _series_case(ctx, _u_sum_body)


def _u_sum_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    for a in range(AMAX + 1):
        for lhs_text, rhs_text in ((f"(U + R[{a}])' (U + R[{a}])", "I"),
                                   (f"(U + R[{a}]) (U + R[{a}])'", f"I - Q + R[{a}] R[{a}]'")):
            lhs = ev.combination(monomials(parse(lhs_text)), X)
            rhs = ev.combination(monomials(parse(rhs_text)), X)
            bad = sparse_mismatch(lhs, rhs, len(X), E.tol)
            if bad.any():
                k = int(np.argmax(bad))
                return E.counterexample(ev, X[k], f"{lhs_text} = {rhs_text}")
    return None


# -- extremes of Q ---------------------------------------------------------------------

@check("seriesops.Q_identity", "Q_{\\pi}=I")
def _q_identity(ctx: Context):
    for n in ctx.config.grid:
        for rep in ctx.base_catalog(n):
            if isinstance(rep, StandardRep) or (isinstance(rep, CycleRep) and rep.c == 1):
                yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _q_identity_body(E, rep))


def _q_identity_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    return E.compare(ev, X, ev.Q(X), Terms.basis(X), "Q = I")


@check("seriesops.Q_proper", "0\\lneq Q_{\\pi} \\lneq I")
def _q_proper(ctx: Context):
    for n in ctx.config.grid:
        for rep in ctx.base_catalog(n):
            if isinstance(rep, CycleRep) and rep.c == n:
                yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _q_proper_body(E, rep))


def _q_proper_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    omega = ev.encode([()])
    q0 = ev.Q(omega)
    if q0.nonzero[0]:
        return E.counterexample(ev, omega[0], "Q vacuum = 0", actual=E.term_json(ev, q0, 0))
    Q = ev.Q(X)
    if not Q.nonzero.any():
        return E.counterexample(ev, omega[0], "Q != 0: no sampled label in the range of Q")
    if Q.nonzero.all():
        return E.counterexample(ev, omega[0], "Q != I: every sampled label in the range of Q")
    return None
