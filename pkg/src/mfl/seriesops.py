"""Per-vector evaluation of the strongly convergent sums Q, R_a and U.

For a monomial representation every basis vector meets at most one summand of
``R_a = sum_j π(f(t_{j+a}) f(t_j)*)``: the one whose range contains it.  The
strip analysis finds that summand by walking the backward s_n-orbit, so the
infinite sums are evaluated exactly instead of by truncation.
"""

from __future__ import annotations

import os
from typing import NamedTuple, Union

from .embedding import apply_word_generator
from .errors import InvalidLabel, MFLError, SignatureMismatch, StripDivergence
from .labels import Label
from .repcore import INF, MonomialRep, Term

DEFAULT_MAX_STRIP_ITERS = 10_000


def max_strip_iters() -> int:
    """Strip bound: ``MFL_MAX_STRIP_ITERS`` if set, else the default."""
    raw = os.environ.get("MFL_MAX_STRIP_ITERS", "").strip()
    if not raw:
        return DEFAULT_MAX_STRIP_ITERS
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise MFLError(f"MFL_MAX_STRIP_ITERS must be a positive integer, got {raw!r}")
    return value


class InRange(NamedTuple):
    """e_x = phase * π(f(t_j)) e_base."""

    j: int
    phase: complex
    base: Label


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return self.name


INFINITE_TAIL = _Marker("INFINITE_TAIL")
NOT_IN_ANY_RANGE = _Marker("NOT_IN_ANY_RANGE")

StripResult = Union[InRange, _Marker]


def strip_classify(rep: MonomialRep, x: Label) -> StripResult:
    bound = max_strip_iters()
    memo = rep._strip_memo.setdefault(bound, {})
    hit = memo.get(x)
    if hit is not None:
        return hit
    if not rep.is_zero_rep and not rep.is_label(x):
        raise InvalidLabel(f"{x!r} is not a basis label of {rep.descriptor}")
    res = _strip(rep, x, bound)
    memo[x] = res
    return res


def _strip(rep: MonomialRep, x: Label, bound: int) -> StripResult:
    if rep.is_zero_rep:
        raise MFLError("strip analysis of the zero representation")
    n = rep.arity
    if n == INF:
        d = rep.range_decode(x)
        if d is None:
            return NOT_IN_ANY_RANGE
        return InRange(d[0], d[1], d[2])
    phase = 1 + 0j
    k = 0
    seen = {x}
    cur = x
    while True:
        d = rep.range_decode(cur)
        if d is None:
            raise MFLError(f"range_decode undefined on {cur!r} for a finite-arity representation")
        i, ph, pre = d
        phase *= ph
        if i < n:
            return InRange((n - 1) * k + i, phase, pre)
        k += 1
        if pre in seen:
            return INFINITE_TAIL
        seen.add(pre)
        cur = pre
        if k >= bound:
            raise StripDivergence(f"backward s_{n}-orbit of {x!r} exceeded {bound} steps without repeating")


def apply_Q(rep: MonomialRep, x: Label) -> Term:
    return (1 + 0j, x) if type(strip_classify(rep, x)) is InRange else None


def apply_R(rep: MonomialRep, a: int, x: Label, adjoint: bool = False) -> Term:
    if a < 0:
        raise ValueError(f"R index must be >= 0, got {a}")
    s = strip_classify(rep, x)
    if type(s) is not InRange:
        return None
    j, phase, base = s
    if adjoint:
        if j < a + 1:
            return None
        t = apply_word_generator(rep, j - a, base)
    else:
        t = apply_word_generator(rep, j + a, base)
    return None if t is None else (phase * t[0], t[1])


def apply_U(rep: MonomialRep, x: Label, adjoint: bool = False) -> Term:
    """U = π(s_n)(I - Q); the adjoint is (I - Q)π(s_n)*."""
    n = rep.arity
    if n == INF:
        raise SignatureMismatch("U is defined for finite arity only")
    if adjoint:
        v = rep.apply_adjoint(n, x)
        if v is None or apply_Q(rep, v[1]) is not None:
            return None
        return v
    if apply_Q(rep, x) is not None:
        return None
    return rep.apply(n, x)
