"""A small language for operator expressions in Cuntz generators.

Grammar::

    expr   := [sign] term { sign term }
    term   := [scalar] factor { factor }
    factor := atom { "'" | "^" INT }
    atom   := GEN | "I" | "Q" | "U" | "R[" INT "]" | "f[" INT "]" | "(" expr ")"
    GEN    := ("s" | "r" | "t") INT
    scalar := NUMBER | NUMBER "i" | "i"

Juxtaposition is composition (rightmost factor acts first), ``'`` is the
adjoint and ``^k`` a power.  The generator letter is cosmetic: ``s2``, ``r2``
and ``t2`` all denote the second generator of whatever representation the
expression is evaluated on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .embedding import apply_word_generator
from .errors import ExprSyntaxError
from .labels import Label
from .repcore import MonomialRep, VectorSum
from .seriesops import apply_Q, apply_R, apply_U


@dataclass(frozen=True)
class Gen:
    family: str
    index: int


@dataclass(frozen=True)
class Adjoint:
    expr: "Expr"


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((coefficient, expr), ...)


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class QNode:
    pass


@dataclass(frozen=True)
class RNode:
    a: int


@dataclass(frozen=True)
class UNode:
    pass


@dataclass(frozen=True)
class FNode:
    j: int


Expr = Union[Gen, Adjoint, Product, Sum, Identity, QNode, RNode, UNode, FNode]


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gen>[srt]\d+)
  | (?P<bad_gen>[srt](?=-))
  | (?P<rnode>R\[\s*\d+\s*\])
  | (?P<fnode>f\[\s*\d+\s*\])
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<sym>[IQUi()'^+\-])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch.isalpha() and ch not in "srtIQURfi":
                raise ExprSyntaxError(f"unknown generator family {ch!r}", pos)
            raise ExprSyntaxError(f"unexpected character {ch!r}", pos)
        kind = m.lastgroup
        if kind == "bad_gen":
            raise ExprSyntaxError("negative generator index", pos)
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", pos))
    return out


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return e

    def expr(self) -> Expr:
        terms = []
        sign = 1
        if self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append(self.term(sign))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def _scalar(self) -> complex | None:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            c = complex(float(val)) if "." in val else complex(int(val))
            if self.peek()[1] == "i":
                self.take()
                c *= 1j
            return c
        if kind == "sym" and val == "i":
            self.take()
            return 1j
        return None

    def term(self, sign: int):
        coeff = self._scalar()
        factors = []
        while self._starts_factor():
            factors.append(self.factor())
        if not factors:
            if coeff is None:
                kind, val, pos = self.peek()
                raise ExprSyntaxError(f"expected a term, found {val or 'end of input'!r}", pos)
            factors = [Identity()]
        body = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return ((coeff if coeff is not None else 1) * sign, body)

    def _starts_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("gen", "rnode", "fnode") or (kind == "sym" and val in ("I", "Q", "U", "("))

    def factor(self) -> Expr:
        e = self.atom()
        while True:
            kind, val, pos = self.peek()
            if kind == "sym" and val == "'":
                self.take()
                e = Adjoint(e)
            elif kind == "sym" and val == "^":
                self.take()
                kind, val, pos = self.take()
                if kind != "num" or "." in val:
                    raise ExprSyntaxError("power must be a non-negative integer", pos)
                p = int(val)
                e = Identity() if p == 0 else (e if p == 1 else Product((e,) * p))
            else:
                return e

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "gen":
            idx = int(val[1:])
            if idx < 1:
                raise ExprSyntaxError("generator index must be >= 1", pos)
            return Gen(val[0], idx)
        if kind == "rnode":
            return RNode(int(val[2:-1]))
        if kind == "fnode":
            j = int(val[2:-1])
            if j < 1:
                raise ExprSyntaxError("f[j] needs j >= 1", pos)
            return FNode(j)
        if val == "I":
            return Identity()
        if val == "Q":
            return QNode()
        if val == "U":
            return UNode()
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# -- printer -----------------------------------------------------------------

def _fmt_coeff(c: complex) -> list[tuple[int, str]]:
    """Split a coefficient into (sign, scalar-text) pieces the grammar can read."""
    def num(x: float) -> str:
        return str(int(x)) if x == int(x) else repr(abs(x))
    pieces = []
    if c.real != 0:
        pieces.append((1 if c.real > 0 else -1, "" if abs(c.real) == 1 else num(abs(c.real))))
    if c.imag != 0:
        pieces.append((1 if c.imag > 0 else -1, ("" if abs(c.imag) == 1 else num(abs(c.imag))) + "i"))
    return pieces


def to_text(e: Expr) -> str:
    if isinstance(e, Gen):
        return f"{e.family}{e.index}"
    if isinstance(e, Identity):
        return "I"
    if isinstance(e, QNode):
        return "Q"
    if isinstance(e, UNode):
        return "U"
    if isinstance(e, RNode):
        return f"R[{e.a}]"
    if isinstance(e, FNode):
        return f"f[{e.j}]"
    if isinstance(e, Adjoint):
        inner = e.expr
        body = to_text(inner)
        if isinstance(inner, (Product, Sum)):
            body = f"({body})"
        return body + "'"
    if isinstance(e, Product):
        return " ".join(f"({to_text(f)})" if isinstance(f, (Product, Sum)) else to_text(f)
                        for f in e.factors)
    if isinstance(e, Sum):
        parts = []
        for c, sub in e.terms:
            body = to_text(sub)
            if isinstance(sub, Sum):
                body = f"({body})"
            for sign, scal in _fmt_coeff(complex(c)):
                op = "-" if sign < 0 else "+"
                text = f"{scal} {body}" if scal else body
                parts.append((op, text))
        if not parts:
            return "0 I"
        first_op, first = parts[0]
        out = ("- " if first_op == "-" else "") + first
        for op, text in parts[1:]:
            out += f" {op} {text}"
        return out
    raise TypeError(f"not an expression: {e!r}")


# -- evaluation --------------------------------------------------------------

def evaluate(expr: Expr, rep: MonomialRep, v) -> VectorSum:
    """Apply ``expr`` (as an operator on the space of ``rep``) to ``v``.

    ``v`` is a :class:`VectorSum` or a single basis label.
    """
    if not isinstance(v, VectorSum):
        v = VectorSum.basis(v)
    return _apply(expr, rep, v, False)


def _map_terms(v: VectorSum, fn) -> VectorSum:
    out = VectorSum()
    for lab, c in v:
        t = fn(lab)
        if t is not None:
            out.add(t[1], c * t[0])
    return out


def _apply(e: Expr, rep: MonomialRep, v: VectorSum, dagger: bool) -> VectorSum:
    if isinstance(e, Gen):
        act = rep.apply_adjoint if dagger else rep.apply
        return _map_terms(v, lambda x: act(e.index, x))
    if isinstance(e, Adjoint):
        return _apply(e.expr, rep, v, not dagger)
    if isinstance(e, Product):
        order = e.factors if dagger else reversed(e.factors)
        for f in order:
            v = _apply(f, rep, v, dagger)
        return v
    if isinstance(e, Sum):
        out = VectorSum()
        for c, sub in e.terms:
            out.add_vector(_apply(sub, rep, v, dagger), c.conjugate() if dagger else c)
        return out
    if isinstance(e, Identity):
        return VectorSum(v.coeffs)
    if isinstance(e, QNode):
        return _map_terms(v, lambda x: apply_Q(rep, x))
    if isinstance(e, RNode):
        return _map_terms(v, lambda x: apply_R(rep, e.a, x, dagger))
    if isinstance(e, UNode):
        return _map_terms(v, lambda x: apply_U(rep, x, dagger))
    if isinstance(e, FNode):
        return _map_terms(v, lambda x: apply_word_generator(rep, e.j, x, dagger))
    raise TypeError(f"not an expression: {e!r}")


# -- expansion into monomials --------------------------------------------------

Atom = tuple  # (kind, arg, dagger) with kind in {"gen", "Q", "R", "U", "F"}


def monomials(e: Expr, dagger: bool = False) -> list[tuple[complex, tuple]]:
    """Expand into ``[(coefficient, atoms), ...]``; atoms are listed left to right.

    Identity contributes the empty word.  Coefficients of equal words are
    merged and zeros dropped.
    """
    raw = _expand(e, dagger)
    merged: dict = {}
    for c, w in raw:
        merged[w] = merged.get(w, 0) + c
    return [(c, w) for w, c in merged.items() if abs(c) > 1e-12]


def _expand(e: Expr, dagger: bool):
    if isinstance(e, Gen):
        return [(1 + 0j, (("gen", e.index, dagger),))]
    if isinstance(e, Identity):
        return [(1 + 0j, ())]
    if isinstance(e, QNode):
        return [(1 + 0j, (("Q", 0, False),))]
    if isinstance(e, RNode):
        return [(1 + 0j, (("R", e.a, dagger),))]
    if isinstance(e, UNode):
        return [(1 + 0j, (("U", 0, dagger),))]
    if isinstance(e, FNode):
        return [(1 + 0j, (("F", e.j, dagger),))]
    if isinstance(e, Adjoint):
        return _expand(e.expr, not dagger)
    if isinstance(e, Sum):
        out = []
        for c, sub in e.terms:
            c = complex(c).conjugate() if dagger else complex(c)
            out.extend((c * c2, w) for c2, w in _expand(sub, dagger))
        return out
    if isinstance(e, Product):
        factors = list(reversed(e.factors)) if dagger else list(e.factors)
        acc = [(1 + 0j, ())]
        for f in factors:
            nxt = _expand(f, dagger)
            acc = [(c1 * c2, w1 + w2) for c1, w1 in acc for c2, w2 in nxt]
        return acc
    raise TypeError(f"not an expression: {e!r}")


def apply_word(rep: MonomialRep, word: tuple, x: Label):
    """Apply a monomial word (atoms left to right, rightmost first) to e_x."""
    phase = 1 + 0j
    for kind, arg, dag in reversed(word):
        if kind == "gen":
            t = rep.apply_adjoint(arg, x) if dag else rep.apply(arg, x)
        elif kind == "Q":
            t = apply_Q(rep, x)
        elif kind == "R":
            t = apply_R(rep, arg, x, dag)
        elif kind == "U":
            t = apply_U(rep, x, dag)
        else:
            t = apply_word_generator(rep, arg, x, dag)
        if t is None:
            return None
        phase *= t[0]
        x = t[1]
    return (phase, x)
