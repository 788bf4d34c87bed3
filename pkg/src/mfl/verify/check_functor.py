"""Checks on the functors F_{n,m}, F_{inf,n}, F_{n,inf} and on morphisms."""

from __future__ import annotations

import numpy as np

from ..functor import functor_extend, functor_nm, functor_restrict
from ..kernel import Terms, split_sum, terms_agree, then, wrap_sum
from ..repcore import INF, CycleRep, DirectSumRep, direct_sum
from .check_rep import (
    all_catalog,
    case,
    completeness_violation,
    decode_violation,
    finite_catalog,
    orthogonality_violation,
)
from .check_series import AMAX, blockwise_violation
from .core import Context, Engine, arities_text, check


def same_action(E: Engine, a, b, generators, label: str):
    """First disagreement between the generator actions of two representations on one label space."""
    ea, eb = E.pair(a, b)
    X = E.X(ea)
    if not len(X):
        return "vacuous"
    for i in generators:
        for adj in (False, True):
            cex = E.compare(ea, X, ea.act(i, adj, X), eb.act(i, adj, X), label, i, adj, ev_expected=eb)
            if cex:
                return cex
    return None


def _gens(arity, jbound):
    return range(1, (jbound if arity == INF else arity) + 1)


# -- closure -------------------------------------------------------------------------

def closure_violation(E: Engine, image, jbound: int):
    for fn in (orthogonality_violation, completeness_violation):
        cex = fn(E, image, jbound)
        if cex:
            return cex
    return decode_violation(E, image)


@check("functor.closure", "\\pi(r_m)(I-Q_{\\pi})+R_{\\pi,n-1}")
def _closure(ctx: Context):
    for m, rep in finite_catalog(ctx):
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n, m=m),
                       lambda E, n=n, rep=rep: closure_violation(E, functor_nm(n, rep), ctx.config.jbound))


@check("functor.closure_restrict", "F_{\\infty,n}({\\cal H},\\pi):=({\\cal H},\\ \\pi\\circ f_{n,\\infty})")
def _closure_restrict(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(to=INF, n=n),
                   lambda E, n=n, rep=rep: closure_violation(E, functor_restrict(n, rep), ctx.config.jbound))


@check("functor.closure_extend", "\\pi(I)-\\sum_{j=1}^{\\infty}\\pi(t_{j}t_j^*)")
def _closure_extend(ctx: Context):
    for rep in ctx.inf_catalog():
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n, m=INF),
                       lambda E, n=n, rep=rep: closure_violation(E, functor_extend(n, rep), ctx.config.jbound))


# -- functor laws ----------------------------------------------------------------------

@check("functor.composition", "F_{n,m}\\circ F_{m,l}=F_{n,l}")
def _composition(ctx: Context):
    grid = ctx.config.grid
    for l, rep in finite_catalog(ctx):
        for m in grid:
            for n in grid:
                yield case(ctx, rep, arities_text(n=n, m=m, l=l),
                           lambda E, n=n, m=m, rep=rep: same_action(
                               E, functor_nm(n, functor_nm(m, rep)), functor_nm(n, rep), range(1, n + 1),
                               "F_{n,m} F_{m,l} = F_{n,l}"))


@check("functor.inverse", "F_{m,n}\\circ F_{n,m}=id")
def _inverse(ctx: Context):
    for m, rep in finite_catalog(ctx):
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n, m=m),
                       lambda E, n=n, m=m, rep=rep: same_action(
                           E, functor_nm(m, functor_nm(n, rep)), rep, range(1, m + 1), "F_{m,n} F_{n,m} = id"))


@check("functor.identity", "If $n=m$, then $\\pi'=\\pi$")
def _identity(ctx: Context):
    for n, rep in finite_catalog(ctx):
        yield case(ctx, rep, arities_text(n=n),
                   lambda E, n=n, rep=rep: same_action(E, functor_nm(n, rep), rep, range(1, n + 1), "F_{n,n} = id"))


@check("functor.restrict_composition",
       "F_{\\infty,n}\\circ F_{n,m}=F_{\\infty,m};\\ \\pi'\\circ f_{n,\\infty}=\\pi\\circ f_{m,\\infty}")
def _restrict_composition(ctx: Context):
    """Restricting F_{n,m}(pi) along f_{n,inf} gives the restriction of pi along f_{m,inf}.

    This is also the transition identity pi' o f_{n,inf} = pi o f_{m,inf}.  The
    left side applies t_j = s_n^k s_i as a product of image generators, built
    up from t_{j-n+1}; its adjoints go through the restriction itself.
    """
    for m, rep in finite_catalog(ctx):
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(to=INF, n=n, m=m),
                       lambda E, n=n, rep=rep: _restrict_composition_body(ctx, E, n, rep))


def _restrict_composition_body(ctx: Context, E: Engine, n: int, rep):
    image = functor_nm(n, rep)
    ei, er = E.pair(image, functor_restrict(rep.arity, rep))
    el, _ = E.pair(functor_restrict(n, image), rep)
    if not el.compatible(ei):
        el = E.python(functor_restrict(n, image))
        ei, er = E.python(image), E.python(functor_restrict(rep.arity, rep))
    X = E.X(ei)
    words: dict = {}
    for j in range(1, ctx.config.jbound + 1):
        if j < n:
            words[j] = ei.act(j, False, X)
        else:
            words[j] = then(words[j - n + 1], lambda L: ei.act(n, False, L))
        for adj, lhs in ((False, words[j]), (True, el.act(j, True, X))):
            cex = E.compare(ei, X, lhs, er.act(j, adj, X), "F_{inf,n} F_{n,m} = F_{inf,m}", j, adj,
                            ev_expected=er)
            if cex:
                return cex
    return None


@check("functor.extend_composition", "F_{n,m}\\circ F_{m,\\infty}=F_{n,\\infty}")
def _extend_composition(ctx: Context):
    grid = ctx.config.grid
    for rep in ctx.inf_catalog():
        for m in grid:
            for n in grid:
                yield case(ctx, rep, arities_text(n=n, m=m, l=INF),
                           lambda E, n=n, m=m, rep=rep: same_action(
                               E, functor_nm(n, functor_extend(m, rep)), functor_extend(n, rep), range(1, n + 1),
                               "F_{n,m} F_{m,inf} = F_{n,inf}"))


@check("functor.extension_restricts", "\\pi'\\circ f_{n,\\infty}=\\pi")
def _extension_restricts(ctx: Context):
    jb = ctx.config.jbound
    for rep in ctx.inf_catalog():
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n),
                       lambda E, n=n, rep=rep: same_action(
                           E, functor_restrict(n, functor_extend(n, rep)), rep, range(1, jb + 1),
                           "F_{inf,n} F_{n,inf} = id"))


@check("functor.series_invariance", "R_{\\pi',a}=R_{\\pi,a}")
def _series_invariance(ctx: Context):
    for m, rep in finite_catalog(ctx):
        for n in ctx.config.grid:
            yield case(ctx, rep, arities_text(n=n, m=m), lambda E, n=n, rep=rep: _series_invariance_body(E, n, rep))


def _series_invariance_body(E: Engine, n: int, rep):
    ea, eb = E.pair(functor_nm(n, rep), rep)
    X = E.X(ea)
    cex = E.compare(ea, X, ea.Q(X), eb.Q(X), "Q_{F(pi)} = Q_pi", ev_expected=eb)
    if cex:
        return cex
    for a in range(AMAX + 1):
        for adj in (False, True):
            cex = E.compare(ea, X, ea.R(a, adj, X), eb.R(a, adj, X), f"R_(F(pi),{a}) = R_(pi,{a})",
                            adjoint=adj, ev_expected=eb)
            if cex:
                return cex
    return None


@check("functor.direct_sum", "\\pi'(s_i)=\\sum_{\\lambda}\\pi'_{\\lambda}(s_i)")
def _direct_sum(ctx: Context):
    for m in ctx.config.grid:
        for rep in ctx.sum_catalog(m):
            for n in ctx.config.grid:
                yield case(ctx, rep, arities_text(n=n, m=m), lambda E, n=n, rep=rep: _direct_sum_body(E, n, rep))


def _direct_sum_body(E: Engine, n: int, rep: DirectSumRep):
    total = functor_nm(n, rep)
    parts = [functor_nm(n, p) for p in rep.parts]
    for i in range(1, n + 1):
        for adj in (False, True):
            cex = blockwise_violation(E, total, parts, lambda e, L, i=i, adj=adj: e.act(i, adj, L),
                                      f"F(pi_1 + pi_2)(s_{i}{'*' if adj else ''}) acts blockwise")
            if cex:
                return cex
    return None


@check("functor.label_space", "G_n\\circ F_{n,m}=G_{m}")
def _label_space(ctx: Context):
    for m, rep in all_catalog(ctx):
        for n in ctx.config.grid:
            if m == INF:
                yield case(ctx, rep, arities_text(n=n, m=m),
                           lambda E, n=n, rep=rep: _label_space_body(ctx, functor_extend(n, rep), rep))
            else:
                yield case(ctx, rep, arities_text(n=n, m=m),
                           lambda E, n=n, rep=rep: _label_space_body(ctx, functor_nm(n, rep), rep))


def _label_space_body(ctx: Context, image, rep):
    a, b = image.labels(ctx.config.depth), ctx.labels(rep)
    if a != b:
        return {"rep": rep.descriptor, "label": None, "relation": "image enumerates the source labels"}
    for x in a[:64]:
        if image.is_label(x) != rep.is_label(x):
            return {"rep": rep.descriptor, "label": None, "relation": "image has the source canonicality predicate"}
    return None


# -- morphisms -------------------------------------------------------------------------

class BatchMap:
    """A monomial label map given on batches, between two representations."""

    def __init__(self, name, source, target, fn):
        self.name = name
        self.source = source
        self.target = target
        self.fn = fn  # fn(src_ev, tgt_ev, X) -> Terms in the target encoding


def _identity_map(rep):
    return BatchMap("id", rep, rep, lambda s, t, X: Terms.basis(X))


def _inclusion(total, b):
    K = len(total.parts)
    return BatchMap(f"incl{b}", total.parts[b], total,
                    lambda s, t, X: Terms.basis(wrap_sum(b, X, K)))


def _projection(total, b):
    K = len(total.parts)

    def fn(s, t, X):
        branch, inner = split_sum(X, K)
        keep = branch == b
        out = Terms.empty_like(inner, len(X))
        out.nonzero[keep] = True
        out.phase[keep] = 1
        out.label[keep] = inner[keep]
        return out
    return BatchMap(f"proj{b}", total, total.parts[b], fn)


def _zero(source, target):
    def fn(s, t, X):
        like = np.empty(0, dtype=np.int64 if t.compiled else object)
        return Terms.empty_like(like, len(X))
    return BatchMap("0", source, target, fn)


def _swap(total):
    def fn(s, t, X):
        branch, inner = split_sum(X, 2)
        out = wrap_sum(0, inner, 2)
        flip = branch == 0
        out[flip] = wrap_sum(1, inner[flip], 2)
        return Terms.basis(out)
    return BatchMap("swap", total, total, fn)


def intertwines(E: Engine, T: BatchMap, source, target, jbound: int):
    """None if T source(x) = target(x) T on the samples, else a counterexample."""
    es, et = E.ev(source), E.ev(target)
    if es.compiled != et.compiled:
        es, et = E.python(source), E.python(target)
    X = E.X(es)
    if not len(X):
        return None
    Tx = T.fn(es, et, X)
    for i in _gens(source.arity, jbound):
        for adj in (False, True):
            lhs = then(es.act(i, adj, X), lambda L: T.fn(es, et, L))
            rhs = then(Tx, lambda L, i=i, adj=adj: et.act(i, adj, L))
            ok = terms_agree(lhs, rhs, E.tol)
            if not ok.all():
                k = int(np.argmin(ok))
                return E.counterexample(es, X[k], f"{T.name} intertwines s_{i}{'*' if adj else ''}", i, adj,
                                        expected=E.term_json(et, rhs, k), actual=E.term_json(et, lhs, k))
    return None


def _morphism_family(ctx: Context, m: int):
    """(map, source, target, expected membership) over the base catalog of arity m."""
    base = ctx.base_catalog(m)
    out = []
    for rep in base:
        out.append((_identity_map(rep), True))
    if len(base) >= 2:
        total = direct_sum([base[0], base[-1]])
        out += [(_inclusion(total, 0), True), (_inclusion(total, 1), True),
                (_projection(total, 0), True), (_projection(total, 1), True),
                (_zero(base[0], base[-1]), True)]
    cycles = [r for r in base if isinstance(r, CycleRep) and r.c == m]
    if len(cycles) >= 2:
        out.append((_swap(direct_sum([cycles[0], cycles[0]])), True))
        out.append((_swap(direct_sum([cycles[0], cycles[1]])), False))
    return out


@check("functor.morphisms", "\\mor(\\pi_1',\\pi_2')=\\mor(\\pi_1,\\pi_2)")
def _morphisms(ctx: Context):
    for m in ctx.config.grid:
        for T, member in _morphism_family(ctx, m):
            for n in ctx.config.grid:
                yield case(ctx, T.source, arities_text(n=n, m=m),
                           lambda E, n=n, T=T, member=member: _morphism_body(ctx, E, n, T, member),
                           detail=f"map {T.name} -> {T.target.descriptor}; expected member={member}")


def _morphism_body(ctx: Context, E: Engine, n: int, T: BatchMap, member: bool):
    jb = ctx.config.jbound
    src = intertwines(E, T, T.source, T.target, jb)
    img = intertwines(E, T, functor_nm(n, T.source), functor_nm(n, T.target), jb)
    if (src is None) != (img is None):
        witness = src or img
        return dict(witness, relation=f"{T.name}: Mor membership differs between sources ({src is None}) "
                                      f"and images ({img is None})")
    if (src is None) != member:
        witness = src or {"rep": T.source.descriptor, "label": None}
        return dict(witness, relation=f"{T.name}: expected membership {member}, observed {src is None}")
    return None
