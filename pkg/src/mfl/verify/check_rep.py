"""Checks on the representation core and on the embedding f_{n,inf}."""

from __future__ import annotations

import numpy as np

from ..kernel import Terms, labels_equal, then
from ..repcore import INF, CycleRep, DirectSumRep
from .core import Case, Context, Engine, arities_text, check


def gens(rep, jbound: int, cap: int = 8) -> list[int]:
    if rep.arity == INF:
        return list(range(1, jbound + 1))
    return list(range(1, min(rep.arity, cap) + 1))


def zeros(X: np.ndarray) -> Terms:
    return Terms.empty_like(X, len(X))


def case(ctx: Context, rep, arities: str, body, detail: str = "") -> Case:
    return Case(rep.descriptor, arities, body, detail, samples=len(ctx.labels(rep)))


def finite_catalog(ctx: Context):
    for n in ctx.config.grid:
        for rep in ctx.catalog(n):
            yield n, rep


def all_catalog(ctx: Context):
    yield from finite_catalog(ctx)
    for rep in ctx.inf_catalog():
        yield INF, rep


# -- Cuntz relations ---------------------------------------------------------------

def orthogonality_violation(E: Engine, rep, jbound: int):
    ev = E.ev(rep)
    X = E.X(ev)
    if not len(X):
        return "vacuous"
    for j in gens(rep, jbound):
        t = ev.act(j, False, X)
        if not t.nonzero.all():
            k = int(np.argmin(t.nonzero))
            return E.counterexample(ev, X[k], f"s_{j} is not isometric", j, False)
        for i in gens(rep, jbound):
            back = then(t, lambda L, i=i: ev.act(i, True, L))
            want = Terms.basis(X) if i == j else zeros(X)
            cex = E.compare(ev, X, back, want, f"s_{i}* s_{j} = delta_{{{i},{j}}} I", i, True)
            if cex:
                return cex
    return None


def completeness_violation(E: Engine, rep, jbound: int):
    ev = E.ev(rep)
    X = E.X(ev)
    if not len(X):
        return "vacuous"
    count = np.zeros(len(X), dtype=np.int64)
    for i in gens(rep, jbound, cap=rep.arity if rep.arity != INF else jbound):
        a = ev.act(i, True, X)
        count += a.nonzero
        back = then(a, lambda L, i=i: ev.act(i, False, L))
        rows = a.nonzero
        if rows.any():
            idx = np.nonzero(rows)[0]
            ok = labels_equal(back.label[idx], X[idx]) & (np.abs(back.phase[idx] - 1) <= E.tol)
            if not ok.all():
                k = int(idx[np.argmin(ok)])
                return E.counterexample(ev, X[k], f"s_{i} s_{i}* e_x = e_x on range(s_{i})", i, True)
    if rep.arity != INF:
        bad = count != 1
        relation = "sum_i s_i s_i* = I"
    else:
        bad = count > 1
        relation = f"sum_{{j<={jbound}}} t_j t_j* <= I"
    if bad.any():
        k = int(np.argmax(bad))
        return E.counterexample(ev, X[k], relation, actual=int(count[k]))
    return None


def decode_violation(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    if not len(X):
        return "vacuous"
    found, g, phase, pre = ev.decode(X)
    if rep.arity != INF and not found.all():
        k = int(np.argmin(found))
        return E.counterexample(ev, X[k], "range_decode total on labels")
    if found.any() and (np.abs(np.abs(phase[found]) - 1) > E.tol).any():
        k = int(np.nonzero(found & (np.abs(np.abs(phase) - 1) > E.tol))[0][0])
        return E.counterexample(ev, X[k], "range_decode phase has modulus 1")
    for i in np.unique(g[found]).tolist():
        rows = np.nonzero(found & (g == i))[0]
        img = ev.act(int(i), False, pre[rows])
        want = Terms(np.ones(len(rows), dtype=bool), np.conj(phase[rows]), X[rows])
        cex = E.compare(ev, X[rows], img, want, f"range_decode inverts s_{i}", int(i), False)
        if cex:
            return cex
    return None


@check("repcore.orthogonality", "s_i^*s_j=\\delta_{ij}I")
def _orthogonality(ctx: Context):
    for n, rep in all_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n),
                   lambda E, rep=rep: orthogonality_violation(E, rep, ctx.config.jbound))


@check("repcore.completeness", "s_1s_1^*+\\cdots+s_ns_n^*=I")
def _completeness(ctx: Context):
    for n, rep in all_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n),
                   lambda E, rep=rep: completeness_violation(E, rep, ctx.config.jbound))


@check("repcore.range_decode", "({\\cal H},S_1,\\ldots,S_n)")
def _range_decode(ctx: Context):
    for n, rep in all_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: decode_violation(E, rep))


@check("repcore.cycle_phase", "\\pi_2(s_n)\\Omega_2=-\\Omega_2")
def _cycle_phase(ctx: Context):
    for n in ctx.config.grid:
        for rep in ctx.base_catalog(n):
            if isinstance(rep, CycleRep):
                yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _cycle_phase_body(E, rep))


def _cycle_phase_body(E: Engine, rep: CycleRep):
    ev = E.ev(rep)
    X = E.X(ev)
    omega = ev.encode([()])
    fwd = ev.act(rep.c, False, omega)
    want = Terms(np.ones(1, dtype=bool), np.array([rep.lam]), omega)
    cex = E.compare(ev, omega, fwd, want, "s_c vacuum = lambda vacuum", rep.c, False)
    if cex:
        return cex
    back = ev.act(rep.c, True, omega)
    want = Terms(np.ones(1, dtype=bool), np.array([np.conj(rep.lam)]), omega)
    cex = E.compare(ev, omega, back, want, "s_c* vacuum = conj(lambda) vacuum", rep.c, True)
    if cex:
        return cex
    at_omega = labels_equal(X, np.repeat(omega, len(X)))
    for i in range(1, rep.arity + 1):
        for adj in (False, True):
            t = ev.act(i, adj, X)
            rows = t.nonzero & ~(at_omega & (i == rep.c))
            bad = rows & (t.phase != 1)
            if bad.any():
                k = int(np.argmax(bad))
                return E.counterexample(ev, X[k], "phase exactly 1 away from the cycle vector", i, adj,
                                        actual=E.term_json(ev, t, k))
    return None


@check("repcore.sum_labels", "\\pi'(s_i)=\\sum_{\\lambda}\\pi'_{\\lambda}(s_i)")
def _sum_labels(ctx: Context):
    for n, rep in finite_catalog(ctx):
        if isinstance(rep, DirectSumRep):
            yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _sum_labels_body(ctx, E, rep))


def _sum_labels_body(ctx: Context, E: Engine, rep: DirectSumRep):
    depth = ctx.config.depth
    got = rep.labels(depth)
    want = [(b, x) for b, p in enumerate(rep.parts) for x in p.labels(depth)]
    if len(got) != len(want) or any(g.branch != b or g.inner != x for g, (b, x) in zip(got, want)):
        return {"rep": rep.descriptor, "label": None, "relation": "labels = disjoint union of summand labels"}
    if len(set(got)) != len(got) or not all(rep.is_label(x) for x in got):
        return {"rep": rep.descriptor, "label": None, "relation": "summand labels are distinct and canonical"}
    return None


# -- embedding ---------------------------------------------------------------------

JMAX = 10


@check("embedding.base", "f_{n,\\infty}(t_i)=s_i")
def _emb_base(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _emb_base_body(E, rep))


def _emb_base_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    for i in range(1, rep.arity):
        for adj in (False, True):
            cex = E.compare(ev, X, ev.emb(i, adj, X), ev.act(i, adj, X), f"f(t_{i}) = s_{i}", i, adj)
            if cex:
                return cex
    return None


@check("embedding.shift", "s_nf_{n,\\infty}(t_j)=f_{n,\\infty}(t_{j+n-1})")
def _emb_shift(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _emb_shift_body(E, rep))


def _emb_shift_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    n = rep.arity
    for j in range(1, JMAX + 1):
        lhs = then(ev.emb(j, False, X), lambda L: ev.act(n, False, L))
        cex = E.compare(ev, X, lhs, ev.emb(j + n - 1, False, X), f"s_n f(t_{j}) = f(t_{j + n - 1})", j)
        if cex:
            return cex
    return None


@check("embedding.shift_adjoint", "s_n^*f_{n,\\infty}(t_j)")
def _emb_shift_adj(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _emb_shift_adj_body(E, rep))


def _emb_shift_adj_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    n = rep.arity
    for j in range(1, JMAX + 1):
        lhs = then(ev.emb(j, False, X), lambda L: ev.act(n, True, L))
        want = ev.emb(j - n + 1, False, X) if j >= n else zeros(X)
        cex = E.compare(ev, X, lhs, want, f"s_n* f(t_{j})", j, True)
        if cex:
            return cex
    return None


@check("embedding.isometry", "f_{n,\\infty}(t_{(n-1)k+i}):=s_n^k\\,s_i")
def _emb_isometry(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n), lambda E, rep=rep: _emb_isometry_body(E, rep))


def _emb_isometry_body(E: Engine, rep):
    ev = E.ev(rep)
    X = E.X(ev)
    for j in range(1, JMAX + 1):
        t = ev.emb(j, False, X)
        for jj in range(1, JMAX + 1):
            back = then(t, lambda L, jj=jj: ev.emb(jj, True, L))
            want = Terms.basis(X) if j == jj else zeros(X)
            cex = E.compare(ev, X, back, want, f"f(t_{jj})* f(t_{j})", jj, True)
            if cex:
                return cex
    return None
