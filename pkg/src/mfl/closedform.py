"""Power-series presentations of F_{n,m}(π)(s_j) in the generators of π.

The evaluator here uses nothing but the generator actions of the source
representation.  Every series ``sum_l r_m^{l+p} B (r_m^l)*`` is summed along
the backward r_m-orbit of the input vector; that orbit either dies (finitely
many non-zero terms) or enters a cycle, on which every term must vanish for
the series to converge.  The result is accumulated as a vector and must come
out monomial.  Because it never touches :mod:`mfl.seriesops`, it serves as an
independent oracle for :class:`mfl.functor.NMImage`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalConsistencyError, InvalidCase, SignatureMismatch
from .exprlang import Adjoint, Expr, Gen, Product, Sum, apply_word, monomials, parse
from .labels import Label
from .repcore import INF, MonomialRep, Term, VectorSum, check_arity
from .seriesops import max_strip_iters

CASE_I = "I"
CASE_IIA = "II-a"
CASE_IIB = "II-b"


@dataclass(frozen=True)
class ClosedFormCase:
    n: int
    m: int
    tag: str
    k0: int | None = None
    j0: int | None = None


def classify_case(n: int, m: int) -> ClosedFormCase:
    for a in (n, m):
        check_arity(a)
        if a == INF:
            raise InvalidCase("closed forms need finite arities")
    if n < m:
        return ClosedFormCase(n, m, CASE_I)
    r = (n - 1) % (m - 1)
    if r == 0:
        return ClosedFormCase(n, m, CASE_IIA, k0=(n - 1) // (m - 1))
    j0 = r + 1
    return ClosedFormCase(n, m, CASE_IIB, k0=(n - j0) // (m - 1), j0=j0)


def _r(i: int) -> Gen:
    return Gen("r", i)


def _shift_operator(p: int, m: int) -> Expr:
    # sum_{i<=m-p} r_{i+p-1} r_i*  +  sum_{i>m-p}^{m-1} r_m r_{i+p-m} r_i*
    terms = []
    for i in range(1, m - p + 1):
        terms.append((1, Product((_r(i + p - 1), Adjoint(_r(i))))))
    for i in range(m - p + 1, m):
        terms.append((1, Product((_r(m), _r(i + p - m), Adjoint(_r(i))))))
    return Sum(tuple(terms))


def build_A(n: int, m: int, j0: int | None = None) -> Expr:
    """The finite sum A_{n,m} (case I) or its case II-b variant built from ``j0``."""
    if j0 is None:
        if not 2 <= n < m:
            raise InvalidCase(f"A_{{n,m}} without j0 needs 2 <= n < m, got n={n}, m={m}")
        return _shift_operator(n, m)
    if not 2 <= j0 <= m - 1:
        raise InvalidCase(f"j0 must lie in [2, m-1], got j0={j0}, m={m}")
    return _shift_operator(j0, m)


def _range_projection(m: int) -> Expr:
    """sum_{i<m} r_i r_i*."""
    return Sum(tuple((1, Product((_r(i), Adjoint(_r(i))))) for i in range(1, m)))


@dataclass(frozen=True)
class Series:
    """coefficient * sum_{l>=0} r_m^{l+shift} B (r_m^l)*."""

    coefficient: complex
    shift: int
    inner: Expr


@dataclass(frozen=True)
class Presentation:
    """head + sum of series; ``head_power`` k means the head term is r_m^k."""

    m: int
    series: tuple = ()
    head_power: int = 1
    head: Expr | None = None
    notes: str = ""


def general_presentation(case: ClosedFormCase) -> Presentation:
    """F_{n,m}(π)(s_n) as printed in the general formulas, with (I - Q) expanded."""
    m = case.m
    proj = _range_projection(m)
    minus_q_part = Series(-1, 1, proj)  # π(r_m)(I - Q) = r_m - sum r_m^{l+1} P (r_m^l)*
    if case.tag == CASE_I:
        extra = Series(1, 0, build_A(case.n, m))
    elif case.tag == CASE_IIA:
        # r_m^{k0} Q = sum_l r_m^{l+k0} P (r_m^l)*
        extra = Series(1, case.k0, proj)
    else:
        extra = Series(1, case.k0, build_A(case.n, m, case.j0))
    return Presentation(m, (minus_q_part, extra))


def _apply_power(rep: MonomialRep, m: int, power: int, v: VectorSum) -> VectorSum:
    for _ in range(power):
        out = VectorSum()
        for lab, c in v:
            t = rep.apply(m, lab)
            if t is not None:
                out.add(t[1], c * t[0])
        v = out
    return v


def _apply_expr(rep: MonomialRep, words, x: Label) -> VectorSum:
    out = VectorSum()
    for c, w in words:
        t = apply_word(rep, w, x)
        if t is not None:
            out.add(t[1], c * t[0])
    return out


def evaluate_series(rep: MonomialRep, series: Series, x: Label) -> VectorSum:
    m = rep.arity
    words = monomials(series.inner)
    out = VectorSum()
    bound = max_strip_iters()
    seen: dict = {}
    contributed: list[int] = []
    cur = (1 + 0j, x)  # (r_m*)^l e_x
    level = 0
    while cur is not None:
        lab = cur[1]
        if lab in seen:
            start = seen[lab]
            if any(l >= start for l in contributed):
                raise InternalConsistencyError(
                    f"series does not converge on {x!r}: non-zero terms on a periodic r_{m}*-orbit")
            break
        seen[lab] = level
        inner = _apply_expr(rep, words, lab)
        if not inner.is_zero():
            contributed.append(level)
            out.add_vector(_apply_power(rep, m, level + series.shift, inner), series.coefficient * cur[0])
        nxt = rep.apply_adjoint(m, lab)
        cur = None if nxt is None else (cur[0] * nxt[0], nxt[1])
        level += 1
        if level > bound:
            raise InternalConsistencyError(f"r_{m}*-orbit of {x!r} exceeded {bound} steps")
    return out


def evaluate_presentation(rep: MonomialRep, pres: Presentation, x: Label) -> VectorSum:
    if rep.arity != pres.m:
        raise SignatureMismatch(f"presentation is over O_{pres.m}, representation has arity {rep.arity}")
    if pres.head is not None:
        out = _apply_expr(rep, monomials(pres.head), x)
    else:
        out = _apply_power(rep, pres.m, pres.head_power, VectorSum.basis(x))
    for s in pres.series:
        out.add_vector(evaluate_series(rep, s, x))
    return out


def _monomial(v: VectorSum, what: str) -> Term:
    if len(v) > 1:
        raise InternalConsistencyError(f"{what} produced a non-monomial vector {v!r}")
    return v.as_term()


def closed_generator_apply(case: ClosedFormCase, rep: MonomialRep, j: int, x: Label) -> Term:
    """F_{n,m}(π)(s_j) e_x computed from the closed-form presentation."""
    n, m = case.n, case.m
    if rep.arity != m:
        raise SignatureMismatch(f"closed form for O_{m} applied to arity {rep.arity}")
    if rep.is_zero_rep:
        return None
    if not 1 <= j <= n:
        raise InvalidCase(f"generator {j} outside 1..{n}")
    if j < n:
        # case I: r_j ; case II: r_m^l r_i with j = (m-1)l + i
        if case.tag == CASE_I:
            return rep.apply(j, x)
        l, r = divmod(j - 1, m - 1)
        t = rep.apply(r + 1, x)
        phase = 1 + 0j
        for _ in range(l):
            if t is None:
                return None
            phase *= t[0]
            t = rep.apply(m, t[1])
        return None if t is None else (phase * t[0], t[1])
    v = evaluate_presentation(rep, general_presentation(case), x)
    return _monomial(v, f"closed form of F_{{{n},{m}}}(s_{n})")


# -- the printed specializations ---------------------------------------------------

@dataclass(frozen=True)
class Display:
    """One displayed formula: head expression plus series, transliterated as text."""

    name: str
    n: int
    m: int
    generator: int
    head: str
    series: tuple  # ((coefficient, shift, inner text), ...)
    expected: str = "match"  # or "finding"
    note: str = ""
    parsed_head: Expr = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "parsed_head", parse(self.head))

    def presentation(self) -> Presentation:
        return Presentation(self.m, tuple(Series(c, p, parse(text)) for c, p, text in self.series),
                            head=self.parsed_head)


DISPLAYS: tuple[Display, ...] = (
    Display("F23.s1", 2, 3, 1, "r1", ()),
    Display("F23.s2.expanded", 2, 3, 2, "r3",
            ((-1, 1, "r1 r1' + r2 r2'"), (1, 0, "r2 r1' + r3 r1 r2'"))),
    Display("F23.s2.collected", 2, 3, 2, "r3",
            ((1, 0, "r2 r1' + r3 (r1 r2' - r1 r1' - r2 r2')"),)),
    Display("F32.r1", 3, 2, 1, "s1", ()),
    Display("F32.r2", 3, 2, 2, "s2 s1", ()),
    Display("F32.r3.expanded", 3, 2, 3, "s2",
            ((-1, 1, "s1 s1'"), (1, 2, "s1 s1'"))),
    Display("F32.r3.collected", 3, 2, 3, "s2",
            ((1, 1, "(s2 - I) s1 s1'"),)),
    Display("F34.r1", 3, 4, 1, "s1", ()),
    Display("F34.r2", 3, 4, 2, "s2", ()),
    Display("F34.r3.expanded", 3, 4, 3, "s4",
            ((-1, 1, "s1 s1' + s2 s2' + s3 s3'"), (1, 0, "s3 s1' + s4 s1 s2' + s4 s2 s3'"))),
    Display("F34.r3.collected", 3, 4, 3, "s4",
            ((1, 0, "s3 s1' + s4 (s1 s2' + s2 s3' - I + s4 s4')"),)),
    Display("F43.s1", 4, 3, 1, "r1", ()),
    Display("F43.s2", 4, 3, 2, "r2", ()),
    Display("F43.s3", 4, 3, 3, "r3 r1", ()),
    Display("F43.s4.expanded", 4, 3, 4, "r3",
            ((-1, 1, "r1 r1' + r2 r2'"), (1, 2, "r2 r1' + r3 r1 r2'")),
            expected="finding",
            note="printed series power r3^(k+2); direct expansion of R_3 gives r3^(k+1) with (k0, j0) = (1, 2)"),
    Display("F43.s4.collected", 4, 3, 4, "r3",
            ((1, 1, "r3 r2 r1' + r3^2 r1 r2' - r1 r1' - r2 r2'"),),
            expected="finding",
            note="collected form of the printed display; inherits the extra power of r3"),
    Display("F43.s4.corrected", 4, 3, 4, "r3",
            ((-1, 1, "r1 r1' + r2 r2'"), (1, 1, "r2 r1' + r3 r1 r2'"))),
)


def display_apply(display: Display, rep: MonomialRep, x: Label) -> VectorSum:
    """Evaluate a printed display on e_x; the result is returned unreduced."""
    return evaluate_presentation(rep, display.presentation(), x)
