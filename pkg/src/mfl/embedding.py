"""The embedding of O_inf into O_n: t_{(n-1)k+i} -> s_n^k s_i."""

from __future__ import annotations

from typing import NamedTuple

from .errors import InvalidIndex, SignatureMismatch
from .labels import Label
from .repcore import INF, MonomialRep, Term, check_arity


class EmbeddedIndex(NamedTuple):
    n: int
    j: int
    k: int
    i: int


def decode_index(n: int, j: int) -> EmbeddedIndex:
    """Unique (k, i) with j = (n-1)k + i and 1 <= i <= n-1."""
    check_arity(n)
    if n == INF:
        raise SignatureMismatch("decode_index needs a finite arity")
    if type(j) is not int or j < 1:
        raise InvalidIndex(f"O_inf generator index must be >= 1, got {j!r}")
    k, r = divmod(j - 1, n - 1)
    return EmbeddedIndex(n, j, k, r + 1)


def apply_embedded(rep: MonomialRep, j: int, x: Label, adjoint: bool = False) -> Term:
    """π(f(t_j)) e_x, or its adjoint π(s_i)* (π(s_n)*)^k e_x."""
    n = rep.arity
    if n == INF:
        raise SignatureMismatch("apply_embedded needs a representation of a finite Cuntz algebra")
    if type(j) is not int or j < 1:
        raise InvalidIndex(f"O_inf generator index must be >= 1, got {j!r}")
    k, r = divmod(j - 1, n - 1)
    i = r + 1
    phase = 1 + 0j
    if adjoint:
        for _ in range(k):
            t = rep.apply_adjoint(n, x)
            if t is None:
                return None
            phase *= t[0]
            x = t[1]
        t = rep.apply_adjoint(i, x)
    else:
        t = rep.apply(i, x)
        for _ in range(k):
            if t is None:
                return None
            phase *= t[0]
            t = rep.apply(n, t[1])
    if t is None:
        return None
    return (phase * t[0], t[1])


def apply_word_generator(rep: MonomialRep, j: int, x: Label, adjoint: bool = False) -> Term:
    """The j-th O_inf generator seen inside ``rep``: f(t_j) for finite arity, t_j itself for O_inf."""
    if rep.arity == INF:
        return rep.apply_adjoint(j, x) if adjoint else rep.apply(j, x)
    return apply_embedded(rep, j, x, adjoint)
