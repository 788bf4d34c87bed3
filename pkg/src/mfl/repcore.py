"""Monomial (permutative-with-phase) representations of Cuntz algebras.

A representation is given by the action of each generator and its adjoint on
basis labels.  Every action sends a basis vector to zero or to a unit phase
times another basis vector, so an image is a *term*: ``None`` for zero, or a
``(phase, label)`` pair.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import (
    InvalidGenerator,
    InvalidPhase,
    InvalidSignature,
    MFLError,
    SignatureMismatch,
)
from .labels import OMEGA, Label, Pair, format_label, label_key, label_to_json, sort_key

INF = math.inf
PHASE_TOL = 1e-9
PRUNE_TOL = 1e-12

Term = Optional[tuple]  # None (zero) or (phase: complex, label)
Decoded = Optional[tuple]  # None or (generator, phase, preimage): e_x = phase * s_i e_pre


# -- signatures --------------------------------------------------------------

def check_arity(n) -> None:
    if n == INF:
        return
    if type(n) is not int or n < 2:
        raise InvalidSignature(f"arity must be an integer >= 2 or infinity, got {n!r}")


def is_finite(n) -> bool:
    return n != INF


def arity_text(n) -> str:
    return "inf" if n == INF else str(n)


def parse_arity(text: str):
    text = text.strip()
    if text in ("inf", "infinity", "∞"):
        return INF
    try:
        n = int(text)
    except ValueError:
        raise InvalidSignature(f"bad arity {text!r}") from None
    check_arity(n)
    return n


# -- phases ------------------------------------------------------------------

_EXACT_QUARTERS = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


def phase_from_turns(theta: float) -> complex:
    """exp(2*pi*i*theta), exact at quarter turns."""
    q = theta * 4
    if q == int(q):
        return _EXACT_QUARTERS[int(q) % 4]
    return cmath.exp(2j * math.pi * theta)


def parse_phase(text: str) -> complex:
    text = text.strip()
    fixed = {"1": 1 + 0j, "-1": -1 + 0j, "i": 1j, "-i": -1j}
    if text in fixed:
        return fixed[text]
    if text.startswith("exp:"):
        try:
            return phase_from_turns(float(text[4:]))
        except ValueError:
            raise InvalidPhase(f"bad phase literal {text!r}") from None
    raise InvalidPhase(f"bad phase literal {text!r}")


def phase_text(z: complex) -> str:
    for lit, val in (("1", 1), ("-1", -1), ("i", 1j), ("-i", -1j)):
        if abs(z - val) <= PHASE_TOL:
            return lit
    theta = (cmath.phase(z) / (2 * math.pi)) % 1.0
    return f"exp:{theta!r}"


def check_phase(z: complex) -> complex:
    z = complex(z)
    if abs(abs(z) - 1) > PHASE_TOL:
        raise InvalidPhase(f"phase must have unit modulus, got {z!r}")
    return z


# -- terms -------------------------------------------------------------------

def scale_term(phase: complex, term: Term) -> Term:
    if term is None:
        return None
    return (phase * term[0], term[1])


def terms_close(a: Term, b: Term, tol: float = PHASE_TOL) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a[1] == b[1] and abs(a[0] - b[0]) <= tol


def term_to_json(term: Term):
    if term is None:
        return None
    return {"phase": [term[0].real, term[0].imag], "label": label_to_json(term[1])}


def format_term(term: Term) -> str:
    if term is None:
        return "0"
    return f"{phase_text(term[0])}·{format_label(term[1])}"


class VectorSum:
    """Finitely supported vector: label -> complex coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {}
        if coeffs:
            for lab, c in coeffs.items():
                self.add(lab, c)

    @classmethod
    def basis(cls, label: Label, coeff: complex = 1) -> "VectorSum":
        v = cls()
        v.add(label, coeff)
        return v

    @classmethod
    def from_term(cls, term: Term) -> "VectorSum":
        return cls() if term is None else cls.basis(term[1], term[0])

    def add(self, label: Label, coeff: complex) -> None:
        c = self.coeffs.get(label, 0) + coeff
        if abs(c) <= PRUNE_TOL:
            self.coeffs.pop(label, None)
        else:
            self.coeffs[label] = complex(c)

    def add_vector(self, other: "VectorSum", scale: complex = 1) -> None:
        for lab, c in other.coeffs.items():
            self.add(lab, scale * c)

    def scaled(self, scale: complex) -> "VectorSum":
        out = VectorSum()
        for lab, c in self.coeffs.items():
            out.add(lab, scale * c)
        return out

    def __add__(self, other: "VectorSum") -> "VectorSum":
        out = VectorSum(self.coeffs)
        out.add_vector(other)
        return out

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def as_term(self) -> Term:
        """The single term of a monomial vector; raises if more than one."""
        if not self.coeffs:
            return None
        if len(self.coeffs) > 1:
            raise MFLError(f"vector is not monomial: {len(self.coeffs)} terms")
        (lab, c), = self.coeffs.items()
        return (c, lab)

    def inner(self, other: "VectorSum") -> complex:
        """<self, other>, conjugate-linear in ``self``."""
        return sum((c.conjugate() * other.coeffs[lab] for lab, c in self.coeffs.items()
                    if lab in other.coeffs), 0j)

    def close_to(self, other: "VectorSum", tol: float = PHASE_TOL) -> bool:
        for lab in set(self.coeffs) | set(other.coeffs):
            if abs(self.coeffs.get(lab, 0) - other.coeffs.get(lab, 0)) > tol:
                return False
        return True

    def to_json(self) -> dict:
        items = sorted(self.coeffs.items(), key=lambda kv: sort_key(kv[0]))
        return {label_key(lab): [c.real, c.imag] for lab, c in items}

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}·{format_label(lab)}" for lab, c in self.coeffs.items())
        return f"VectorSum({body or '0'})"


# -- representations -----------------------------------------------------------

class MonomialRep:
    """A representation of O_n (``arity`` = n) or O_inf (``arity`` = INF).

    Subclasses provide ``apply``, ``apply_adjoint``, ``range_decode``,
    ``labels`` and ``is_label``.  Instances are immutable; the only mutable
    state is the strip memo used by :mod:`mfl.seriesops`.
    """

    arity = INF
    is_zero_rep = False

    def __init__(self):
        self._strip_memo: dict = {}

    # generator actions
    def apply(self, i: int, x: Label) -> Term:
        raise NotImplementedError

    def apply_adjoint(self, i: int, x: Label) -> Term:
        raise NotImplementedError

    def range_decode(self, x: Label) -> Decoded:
        raise NotImplementedError

    # label space
    def labels(self, depth: int) -> list:
        raise NotImplementedError

    def is_label(self, x: Label) -> bool:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        return f"<{type(self).__name__}>"

    @property
    def signature(self):
        return self.arity

    def generators(self, bound: int = 12) -> range:
        """Generator indices to sample: all of them, or ``1..bound`` for O_inf."""
        return range(1, (bound if self.arity == INF else self.arity) + 1)

    def check_generator(self, i: int) -> None:
        if type(i) is not int or i < 1 or i > self.arity:
            raise InvalidGenerator(f"generator index {i!r} out of range for arity {arity_text(self.arity)}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor})"


class StandardRep(MonomialRep):
    """O_n on l2(N): s_i e_x = e_{n x + i - 1}."""

    def __init__(self, n: int):
        check_arity(n)
        if n == INF:
            raise InvalidSignature("the standard representation needs a finite arity")
        super().__init__()
        self.arity = n

    @property
    def descriptor(self) -> str:
        return f"std:{self.arity}"

    def apply(self, i, x):
        self.check_generator(i)
        return (1 + 0j, self.arity * x + i - 1)

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        q, r = divmod(x, self.arity)
        return (1 + 0j, q) if r == i - 1 else None

    def range_decode(self, x):
        q, r = divmod(x, self.arity)
        return (r + 1, 1 + 0j, q)

    def labels(self, depth):
        return list(range(self.arity ** depth))

    def is_label(self, x):
        return type(x) is int and x >= 0


class CycleRep(MonomialRep):
    """O_n on words over {1..n} not ending in the cycle letter ``c``.

    s_i prepends ``i``, except on the vacuum where s_c Ω = λ Ω.  With c = n and
    λ = ±1 this is the GNS representation of a Cuntz state.
    """

    def __init__(self, n: int, c: int, lam: complex = 1):
        check_arity(n)
        if n == INF:
            raise InvalidSignature("cycle representations need a finite arity")
        if type(c) is not int or not 1 <= c <= n:
            raise InvalidGenerator(f"cycle letter {c!r} not in 1..{n}")
        super().__init__()
        self.arity = n
        self.c = c
        self.lam = check_phase(lam)
        self._lam_bar = self.lam.conjugate()

    @property
    def descriptor(self) -> str:
        return f"cyc:{self.arity}:{self.c}:{phase_text(self.lam)}"

    def apply(self, i, x):
        self.check_generator(i)
        if not x and i == self.c:
            return (self.lam, OMEGA)
        return (1 + 0j, (i,) + x)

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        if not x:
            return (self._lam_bar, OMEGA) if i == self.c else None
        return (1 + 0j, x[1:]) if x[0] == i else None

    def range_decode(self, x):
        if not x:
            return (self.c, self._lam_bar, OMEGA)
        return (x[0], 1 + 0j, x[1:])

    def labels(self, depth):
        out = []
        letters = range(1, self.arity + 1)
        for length in range(depth + 1):
            for w in itertools.product(letters, repeat=length):
                if not w or w[-1] != self.c:
                    out.append(w)
        return out

    def is_label(self, x):
        return (type(x) is tuple and all(type(a) is int and 1 <= a <= self.arity for a in x)
                and (not x or x[-1] != self.c))


class FreeInfinityRep(MonomialRep):
    """O_inf on all finite words over positive integers; t_j prepends j.

    The vacuum lies in no generator range.  ``labels(depth)`` lists the words
    of total weight (sum of letters) at most ``2 * depth``.
    """

    def __init__(self):
        super().__init__()

    @property
    def descriptor(self) -> str:
        return "free:inf"

    def check_generator(self, i):
        if type(i) is not int or i < 1:
            raise InvalidGenerator(f"generator index {i!r} must be >= 1")

    def apply(self, i, x):
        self.check_generator(i)
        return (1 + 0j, (i,) + x)

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        return (1 + 0j, x[1:]) if x and x[0] == i else None

    def range_decode(self, x):
        if not x:
            return None
        return (x[0], 1 + 0j, x[1:])

    def labels(self, depth):
        return list(_compositions_up_to(2 * depth))

    def is_label(self, x):
        return type(x) is tuple and all(type(a) is int and a >= 1 for a in x)


def _compositions_up_to(weight: int) -> Iterator[tuple]:
    stack = [()]
    out = []
    while stack:
        w = stack.pop()
        out.append(w)
        rest = weight - sum(w)
        for a in range(1, rest + 1):
            stack.append(w + (a,))
    out.sort(key=lambda w: (len(w), w))
    return iter(out)


class ZeroRep(MonomialRep):
    """The zero representation: empty label space."""

    is_zero_rep = True

    def __init__(self, arity=INF):
        check_arity(arity)
        super().__init__()
        self.arity = arity

    @property
    def descriptor(self) -> str:
        return f"zero:{arity_text(self.arity)}"

    def check_generator(self, i):
        if type(i) is not int or i < 1 or i > self.arity:
            raise InvalidGenerator(f"generator index {i!r} out of range")

    def apply(self, i, x):
        self.check_generator(i)
        return None

    def apply_adjoint(self, i, x):
        self.check_generator(i)
        return None

    def range_decode(self, x):
        return None

    def labels(self, depth):
        return []

    def is_label(self, x):
        return False


class DirectSumRep(MonomialRep):
    """Finite direct sum; labels are ``Pair(branch, inner)``."""

    def __init__(self, parts: Sequence[MonomialRep]):
        parts = tuple(parts)
        if not parts:
            raise SignatureMismatch("direct sum of an empty sequence")
        arities = {p.arity for p in parts}
        if len(arities) != 1:
            raise SignatureMismatch(
                "direct sum of mixed signatures: " + ", ".join(sorted(arity_text(a) for a in arities)))
        super().__init__()
        self.parts = parts
        self.arity = parts[0].arity

    @property
    def descriptor(self) -> str:
        return "sum(" + ",".join(p.descriptor for p in self.parts) + ")"

    def check_generator(self, i):
        self.parts[0].check_generator(i)

    def apply(self, i, x):
        b = x[1]
        t = self.parts[b].apply(i, x[2])
        return None if t is None else (t[0], Pair(b, t[1]))

    def apply_adjoint(self, i, x):
        b = x[1]
        t = self.parts[b].apply_adjoint(i, x[2])
        return None if t is None else (t[0], Pair(b, t[1]))

    def range_decode(self, x):
        b = x[1]
        d = self.parts[b].range_decode(x[2])
        return None if d is None else (d[0], d[1], Pair(b, d[2]))

    def labels(self, depth):
        return [Pair(b, x) for b, p in enumerate(self.parts) for x in p.labels(depth)]

    def is_label(self, x):
        return type(x) is Pair and 0 <= x[1] < len(self.parts) and self.parts[x[1]].is_label(x[2])

    @property
    def is_zero_rep(self):
        return all(p.is_zero_rep for p in self.parts)


def make_standard_rep(n: int) -> StandardRep:
    return StandardRep(n)


def make_cycle_rep(n: int, c: int, lam: complex = 1) -> CycleRep:
    return CycleRep(n, c, lam)


def make_free_infinity_rep() -> FreeInfinityRep:
    return FreeInfinityRep()


def make_zero_rep(arity=INF) -> ZeroRep:
    return ZeroRep(arity)


def direct_sum(parts: Sequence[MonomialRep]) -> DirectSumRep:
    return DirectSumRep(parts)


# -- pointwise relation checks ---------------------------------------------------

def cuntz_violation(rep: MonomialRep, samples: Iterable[Label], max_gen: int = 8,
                    tol: float = PHASE_TOL) -> Optional[dict]:
    """First sampled failure of the Cuntz relations, or None.

    Checks s_i* s_j = δ_ij, that ``range_decode`` inverts the generator it
    names, and (finite arity) that every label is decoded.
    """
    gens = list(rep.generators(max_gen))[:max_gen]
    for x in samples:
        for j in gens:
            img = rep.apply(j, x)
            if img is None:
                return {"label": x, "relation": f"s_{j} e_x = 0 (not an isometry)"}
            for i in gens:
                back = rep.apply_adjoint(i, img[1])
                back = scale_term(img[0], back)
                want = (1 + 0j, x) if i == j else None
                if not terms_close(back, want, tol):
                    return {"label": x, "relation": f"s_{i}* s_{j}", "expected": want, "actual": back}
        dec = rep.range_decode(x)
        if dec is None:
            if rep.arity != INF:
                return {"label": x, "relation": "sum s_i s_i* = I (label in no range)"}
            continue
        i, phase, pre = dec
        img = rep.apply(i, pre)
        if not terms_close(img, (phase.conjugate(), x), tol):
            return {"label": x, "relation": f"range_decode via s_{i}", "expected": (phase.conjugate(), x),
                    "actual": img}
        if abs(abs(phase) - 1) > tol:
            return {"label": x, "relation": "decode phase modulus"}
    return None


@dataclass(frozen=True)
class IntertwinerMap:
    """A monomial operator between representation spaces."""

    source: MonomialRep
    target: MonomialRep
    action: Callable[[Label], Term]
    name: str = "T"

    def __call__(self, x: Label) -> Term:
        return self.action(x)

    def on_term(self, term: Term) -> Term:
        if term is None:
            return None
        return scale_term(term[0], self.action(term[1]))


def intertwiner_violation(T: IntertwinerMap, samples: Iterable[Label], jbound: int = 12,
                          tol: float = PHASE_TOL) -> Optional[dict]:
    src, tgt = T.source, T.target
    if src.arity != tgt.arity:
        raise SignatureMismatch("intertwiner between representations of different algebras")
    gens = src.generators(jbound)
    for x in samples:
        tx = T(x)
        for i in gens:
            for adjoint in (False, True):
                act1 = src.apply_adjoint if adjoint else src.apply
                act2 = tgt.apply_adjoint if adjoint else tgt.apply
                lhs = T.on_term(act1(i, x))
                rhs = None if tx is None else scale_term(tx[0], act2(i, tx[1]))
                if not terms_close(lhs, rhs, tol):
                    return {"label": x, "generator": i, "adjoint": adjoint, "expected": rhs, "actual": lhs}
    return None


def check_intertwiner(T: IntertwinerMap, samples: Iterable[Label], jbound: int = 12) -> bool:
    """True iff T π1(x) = π2(x) T for every generator and adjoint on ``samples``."""
    return intertwiner_violation(T, samples, jbound) is None


def identity_map(rep: MonomialRep) -> IntertwinerMap:
    return IntertwinerMap(rep, rep, lambda x: (1 + 0j, x), "id")


def zero_map(source: MonomialRep, target: MonomialRep) -> IntertwinerMap:
    return IntertwinerMap(source, target, lambda x: None, "0")


def block_inclusion(total: DirectSumRep, branch: int) -> IntertwinerMap:
    return IntertwinerMap(total.parts[branch], total, lambda x: (1 + 0j, Pair(branch, x)), f"incl{branch}")


def block_projection(total: DirectSumRep, branch: int) -> IntertwinerMap:
    def act(x):
        return (1 + 0j, x[2]) if x[1] == branch else None
    return IntertwinerMap(total, total.parts[branch], act, f"proj{branch}")


def block_swap(total: DirectSumRep) -> IntertwinerMap:
    """Exchange the blocks of a two-fold sum; intertwines iff the blocks coincide."""
    if len(total.parts) != 2:
        raise SignatureMismatch("block swap needs exactly two summands")
    return IntertwinerMap(total, total, lambda x: (1 + 0j, Pair(1 - x[1], x[2])), "swap")
