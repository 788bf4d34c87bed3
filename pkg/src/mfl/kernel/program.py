"""Flatten representation trees into the compiled kernel's node table.

Labels become int64 codes:

* ``std``: the integer itself;
* ``cyc`` over n letters: bijective base n, prepending ``a`` maps N to n*N + a
  (the empty word is 0);
* ``free``: a binary composition code, prepending ``a`` maps N to
  (N << a) | (1 << (a - 1)), so the first letter is one plus the number of
  trailing zero bits;
* ``sum`` of K parts: ``Pair(b, x)`` maps to code(x) * K + b.

Functor images reuse the codec of their source.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MFLError
from ..functor import Extension, NMImage, Restriction
from ..labels import Pair
from ..repcore import INF, CycleRep, DirectSumRep, FreeInfinityRep, MonomialRep, StandardRep, ZeroRep

K_STD, K_CYC, K_FREE, K_SUM, K_FNM, K_FINF, K_FEXT, K_ZERO = range(8)


class NotCompilable(MFLError):
    """The representation uses a class the kernel does not know."""


# -- codecs ----------------------------------------------------------------------
# A codec is a hashable tuple; equal tuples mean identical label encodings.

def encode(codec: tuple, x) -> int:
    kind = codec[0]
    if kind == "std":
        return x
    if kind == "cyc":
        n = codec[1]
        code = 0
        for a in reversed(x):
            code = n * code + a
        return code
    if kind == "free":
        code = 0
        for a in reversed(x):
            code = (code << a) | (1 << (a - 1))
        return code
    if kind == "sum":
        parts = codec[1]
        return encode(parts[x[1]], x[2]) * len(parts) + x[1]
    raise NotCompilable(f"no labels in codec {codec!r}")


def decode(codec: tuple, code: int):
    kind = codec[0]
    if kind == "std":
        return int(code)
    if kind == "cyc":
        n = codec[1]
        out = []
        while code:
            a = (code - 1) % n + 1
            out.append(a)
            code = (code - 1) // n
        return tuple(out)
    if kind == "free":
        code = int(code)
        out = []
        while code:
            a = (code & -code).bit_length()
            out.append(a)
            code >>= a
        return tuple(out)
    if kind == "sum":
        parts = codec[1]
        b = int(code) % len(parts)
        return Pair(b, decode(parts[b], int(code) // len(parts)))
    raise NotCompilable(f"no labels in codec {codec!r}")


# -- node table ------------------------------------------------------------------

@dataclass
class Program:
    nodes: list
    parts: list
    root: int
    codec: tuple


def _arity(a) -> int:
    return 0 if a == INF else a


def compile_rep(rep: MonomialRep) -> Program:
    nodes: list = []
    parts: list = []
    seen: dict = {}

    def visit(r: MonomialRep) -> tuple[int, tuple]:
        key = id(r)
        if key in seen:
            return seen[key]
        t = type(r)
        if t is StandardRep:
            res = (len(nodes), ("std",))
            nodes.append((K_STD, r.arity, 0, 0, 1))
        elif t is CycleRep:
            res = (len(nodes), ("cyc", r.arity))
            nodes.append((K_CYC, r.arity, r.c, 0, r.lam))
        elif t is FreeInfinityRep:
            res = (len(nodes), ("free",))
            nodes.append((K_FREE, 0, 0, 0, 1))
        elif t is ZeroRep:
            res = (len(nodes), ("zero",))
            nodes.append((K_ZERO, _arity(r.arity), 0, 0, 1))
        elif t is DirectSumRep:
            kids = [visit(p) for p in r.parts]
            offset = len(parts)
            parts.extend(k[0] for k in kids)
            res = (len(nodes), ("sum", tuple(k[1] for k in kids)))
            nodes.append((K_SUM, _arity(r.arity), offset, len(kids), 1))
        elif t is NMImage:
            src, codec = visit(r.source)
            res = (len(nodes), codec)
            nodes.append((K_FNM, r.arity, src, r.m, 1))
        elif t is Restriction:
            src, codec = visit(r.source)
            res = (len(nodes), codec)
            nodes.append((K_FINF, 0, src, r.n, 1))
        elif t is Extension:
            src, codec = visit(r.source)
            res = (len(nodes), codec)
            nodes.append((K_FEXT, r.arity, src, 0, 1))
        else:
            raise NotCompilable(f"no kernel node for {t.__name__}")
        seen[key] = res
        return res

    root, codec = visit(rep)
    return Program(nodes, parts, root, codec)
