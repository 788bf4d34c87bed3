"""The functors F_{n,m}, F_{inf,n} and F_{n,inf} on monomial representations.

Every image lives on the label space of its source; only the generator
actions change.  Morphisms are mapped to themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .embedding import apply_embedded
from .errors import InternalConsistencyError, InvalidGenerator, NotAMorphism, SignatureMismatch
from .labels import Label
from .repcore import (
    INF,
    IntertwinerMap,
    MonomialRep,
    ZeroRep,
    arity_text,
    check_arity,
    intertwiner_violation,
)
from .seriesops import InRange, apply_Q, strip_classify


@dataclass(frozen=True)
class FunctorSpec:
    target: object
    source: object

    def __post_init__(self):
        check_arity(self.target)
        check_arity(self.source)

    @property
    def name(self) -> str:
        return f"F[{arity_text(self.target)},{arity_text(self.source)}]"


class _Image(MonomialRep):
    """Representation sharing the label space of ``source``."""

    def __init__(self, n, source: MonomialRep):
        super().__init__()
        self.arity = n
        self.source = source

    def labels(self, depth):
        return self.source.labels(depth)

    def is_label(self, x):
        return self.source.is_label(x)

    def range_decode(self, x):
        # unique generator whose adjoint survives; e_x = phase * s_i e_pre
        found = None
        for i in range(1, self.arity + 1):
            t = self.apply_adjoint(i, x)
            if t is not None:
                if found is not None:
                    raise InternalConsistencyError(f"label {x!r} lies in the ranges of s_{found[0]} and s_{i}")
                found = (i, t[0], t[1])
        return found


class NMImage(_Image):
    """F_{n,m}(π) for π a representation of O_m."""

    def __init__(self, n: int, source: MonomialRep):
        if source.arity == INF or n == INF:
            raise SignatureMismatch("F_{n,m} needs finite arities")
        super().__init__(n, source)
        self.m = source.arity

    @property
    def descriptor(self) -> str:
        return f"F[{self.arity},{self.m}]({self.source.descriptor})"

    def apply(self, i, x):
        self.check_generator(i)
        src, n = self.source, self.arity
        if i < n:
            return apply_embedded(src, i, x)
        s = strip_classify(src, x)
        if type(s) is InRange:
            t = apply_embedded(src, s.j + n - 1, s.base)
            return None if t is None else (s.phase * t[0], t[1])
        return src.apply(self.m, x)

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        src, n = self.source, self.arity
        if i < n:
            return apply_embedded(src, i, x, adjoint=True)
        # (I - Q) π(r_m)*  +  R_{n-1}*
        first = src.apply_adjoint(self.m, x)
        if first is not None and apply_Q(src, first[1]) is not None:
            first = None
        second = None
        s = strip_classify(src, x)
        if type(s) is InRange and s.j >= n:
            t = apply_embedded(src, s.j - n + 1, s.base)
            second = None if t is None else (s.phase * t[0], t[1])
        if first is not None and second is not None:
            raise InternalConsistencyError(f"both branches of s_{n}* fire on {x!r}")
        return first if second is None else second


class Restriction(_Image):
    """F_{inf,n}(π) = π ∘ f_{n,inf}."""

    def __init__(self, source: MonomialRep):
        if source.arity == INF:
            raise SignatureMismatch("F_{inf,n} needs a representation of a finite Cuntz algebra")
        super().__init__(INF, source)
        self.n = source.arity

    @property
    def descriptor(self) -> str:
        return f"Finf[{self.n}]({self.source.descriptor})"

    def check_generator(self, i):
        if type(i) is not int or i < 1:
            raise InvalidGenerator(f"generator index {i!r} must be >= 1")

    def apply(self, i, x):
        self.check_generator(i)
        return apply_embedded(self.source, i, x)

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        return apply_embedded(self.source, i, x, adjoint=True)

    def range_decode(self, x):
        s = strip_classify(self.source, x)
        if type(s) is InRange:
            return (s.j, s.phase, s.base)
        return None


class Extension(_Image):
    """F_{n,inf}(π): the unmagnifying extension of an O_inf representation."""

    def __init__(self, n: int, source: MonomialRep):
        if source.arity != INF or n == INF:
            raise SignatureMismatch("F_{n,inf} needs a representation of O_inf and finite n")
        check_arity(n)
        super().__init__(n, source)

    @property
    def descriptor(self) -> str:
        return f"Fext[{self.arity}]({self.source.descriptor})"

    def apply(self, i, x):
        self.check_generator(i)
        src, n = self.source, self.arity
        if i < n:
            return src.apply(i, x)
        d = src.range_decode(x)
        if d is None:
            return (1 + 0j, x)
        t = src.apply(d[0] + n - 1, d[2])
        return None if t is None else (d[1] * t[0], t[1])

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        src, n = self.source, self.arity
        if i < n:
            return src.apply_adjoint(i, x)
        d = src.range_decode(x)
        if d is None:
            return (1 + 0j, x)
        if d[0] < n:
            return None
        t = src.apply(d[0] - n + 1, d[2])
        return None if t is None else (d[1] * t[0], t[1])


def functor_apply(spec: FunctorSpec, rep: MonomialRep) -> MonomialRep:
    """Image of ``rep`` under the functor ``spec`` (target <- source)."""
    n, m = spec.target, spec.source
    if rep.arity != m:
        raise SignatureMismatch(f"{spec.name} expects a representation of arity {arity_text(m)}, "
                                f"got {arity_text(rep.arity)}")
    if n == INF and m == INF:
        return rep
    if rep.is_zero_rep:
        return ZeroRep(n)
    if n == INF:
        return Restriction(rep)
    if m == INF:
        return Extension(n, rep)
    return NMImage(n, rep)


def functor_restrict(n: int, rep: MonomialRep) -> MonomialRep:
    return functor_apply(FunctorSpec(INF, n), rep)


def functor_extend(n: int, rep: MonomialRep) -> MonomialRep:
    return functor_apply(FunctorSpec(n, INF), rep)


def functor_nm(n: int, rep: MonomialRep) -> MonomialRep:
    return functor_apply(FunctorSpec(n, rep.arity), rep)


def functor_morphism(spec: FunctorSpec, T: IntertwinerMap, samples: Optional[Iterable[Label]] = None,
                     depth: int = 3, jbound: int = 12) -> IntertwinerMap:
    """F(T) = T, re-typed between the image representations.

    ``T`` is checked on ``samples`` (default: the source's labels to ``depth``)
    and rejected if it does not intertwine.
    """
    if samples is None:
        samples = T.source.labels(depth)
    samples = list(samples)
    bad = intertwiner_violation(T, samples, jbound)
    if bad is not None:
        raise NotAMorphism(f"{T.name} is not an intertwiner: {bad}")
    return IntertwinerMap(functor_apply(spec, T.source), functor_apply(spec, T.target), T.action, T.name)
