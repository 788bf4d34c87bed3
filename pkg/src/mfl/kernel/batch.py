"""Batch evaluation of representation operators over arrays of labels.

Two interchangeable evaluators share one interface:

* :class:`CompiledEvaluator` runs the Cython kernel on int64 label codes;
* :class:`PythonEvaluator` loops over object arrays of labels and calls the
  reference implementation in :mod:`mfl.repcore`, :mod:`mfl.seriesops` and
  :mod:`mfl.embedding`.

:func:`get_evaluator` picks the compiled one when the extension imports and the
representation compiles; ``MFL_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..embedding import apply_word_generator
from ..errors import (
    InternalConsistencyError,
    InvalidGenerator,
    KernelOverflow,
    MFLError,
    SignatureMismatch,
    StripDivergence,
)
from ..labels import Pair
from ..repcore import INF, MonomialRep
from ..seriesops import InRange, NOT_IN_ANY_RANGE, apply_Q, apply_R, apply_U, max_strip_iters, strip_classify
from . import program

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

STRIP_IN, STRIP_TAIL, STRIP_NONE = 1, 2, 3


def kernel_available() -> bool:
    return _ckernel is not None


def kernel_mode() -> str:
    mode = os.environ.get("MFL_KERNEL", "auto").strip().lower()
    return mode if mode in ("auto", "compiled", "python") else "auto"


class BatchFailure(MFLError):
    """An operator failed on one label of a batch."""

    def __init__(self, label, cause: Exception):
        super().__init__(f"{type(cause).__name__} at label {label!r}: {cause}")
        self.label = label
        self.cause = cause


# -- value types -------------------------------------------------------------------

@dataclass
class Terms:
    """Row-wise monomial terms: ``nonzero[k]`` and, if set, ``phase[k] * e_label[k]``."""

    nonzero: np.ndarray
    phase: np.ndarray
    label: np.ndarray

    def __len__(self) -> int:
        return len(self.nonzero)

    @classmethod
    def basis(cls, labels: np.ndarray) -> "Terms":
        n = len(labels)
        return cls(np.ones(n, dtype=bool), np.ones(n, dtype=np.complex128), labels)

    @classmethod
    def empty_like(cls, labels: np.ndarray, size: int) -> "Terms":
        lab = np.empty(size, dtype=object) if labels.dtype == object else np.full(size, -1, dtype=np.int64)
        return cls(np.zeros(size, dtype=bool), np.zeros(size, dtype=np.complex128), lab)

    def scaled(self, c: complex) -> "Terms":
        return Terms(self.nonzero, self.phase * c, self.label)


def then(t: Terms, fn) -> Terms:
    """Apply a batch operator to the non-zero rows of ``t``; phases multiply."""
    mask = t.nonzero
    if mask.all():
        r = fn(t.label)
        return Terms(r.nonzero, np.where(r.nonzero, t.phase * r.phase, 0), r.label)
    out = Terms.empty_like(t.label, len(t))
    if mask.any():
        r = fn(t.label[mask])
        out.nonzero[mask] = r.nonzero
        out.phase[mask] = np.where(r.nonzero, t.phase[mask] * r.phase, 0)
        out.label[mask] = r.label
    return out


def labels_equal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.fromiter((x == y for x, y in zip(a, b)), dtype=bool, count=len(a))
    return a == b


def terms_agree(a: Terms, b: Terms, tol: float) -> np.ndarray:
    """Row mask where two term arrays are equal (labels exactly, phases within ``tol``)."""
    ok = a.nonzero == b.nonzero
    both = a.nonzero & b.nonzero
    if a.label.dtype != object and b.label.dtype != object:
        same = (a.label == b.label) & (np.abs(a.phase - b.phase) <= tol)
        return ok & (same | ~both)
    if both.any():
        idx = np.nonzero(both)[0]
        same = labels_equal(a.label[idx], b.label[idx]) & (np.abs(a.phase[idx] - b.phase[idx]) <= tol)
        ok[idx] &= same
    return ok


@dataclass
class Sparse:
    """Row-indexed finite linear combinations: entries ``(row, label, coefficient)``."""

    rows: np.ndarray
    labels: np.ndarray
    coefs: np.ndarray

    @classmethod
    def empty(cls, like: np.ndarray) -> "Sparse":
        lab = np.empty(0, dtype=object) if like.dtype == object else np.empty(0, dtype=np.int64)
        return cls(np.empty(0, dtype=np.int64), lab, np.empty(0, dtype=np.complex128))

    @classmethod
    def from_terms(cls, t: Terms, rows: np.ndarray | None = None, scale: complex = 1) -> "Sparse":
        idx = np.nonzero(t.nonzero)[0]
        r = idx if rows is None else rows[idx]
        return cls(r.astype(np.int64), t.label[idx], t.phase[idx] * scale)

    @staticmethod
    def concat(parts: Sequence["Sparse"], like: np.ndarray) -> "Sparse":
        parts = [p for p in parts if len(p.rows)]
        if not parts:
            return Sparse.empty(like)
        return Sparse(np.concatenate([p.rows for p in parts]),
                      np.concatenate([p.labels for p in parts]),
                      np.concatenate([p.coefs for p in parts]))

    def merged(self, prune: float = 1e-12) -> "Sparse":
        """Combine equal (row, label) entries and drop coefficients of modulus <= ``prune``."""
        if not len(self.rows):
            return self
        if self.labels.dtype == object:
            acc: dict = {}
            for r, lab, c in zip(self.rows.tolist(), self.labels, self.coefs):
                key = (r, lab)
                acc[key] = acc.get(key, 0) + c
            items = [(k, c) for k, c in acc.items() if abs(c) > prune]
            items.sort(key=lambda kc: kc[0][0])
            labels = np.empty(len(items), dtype=object)
            for k, (key, _) in enumerate(items):
                labels[k] = key[1]
            return Sparse(np.array([k[0] for k, _ in items], dtype=np.int64), labels,
                          np.array([c for _, c in items], dtype=np.complex128))
        order = np.lexsort((self.labels, self.rows))
        rows, labels, coefs = self.rows[order], self.labels[order], self.coefs[order]
        start = np.ones(len(rows), dtype=bool)
        start[1:] = (rows[1:] != rows[:-1]) | (labels[1:] != labels[:-1])
        idx = np.nonzero(start)[0]
        sums = np.add.reduceat(coefs, idx)
        keep = np.abs(sums) > prune
        return Sparse(rows[idx][keep], labels[idx][keep], sums[keep])

    def as_terms(self, size: int, like: np.ndarray) -> tuple[Terms, np.ndarray]:
        """Monomial view of a merged combination plus the mask of rows with several entries."""
        out = Terms.empty_like(like, size)
        counts = np.bincount(self.rows, minlength=size) if len(self.rows) else np.zeros(size, dtype=np.int64)
        single = np.nonzero(counts[self.rows] == 1)[0] if len(self.rows) else np.empty(0, dtype=np.int64)
        r = self.rows[single]
        out.nonzero[r] = True
        out.phase[r] = self.coefs[single]
        out.label[r] = self.labels[single]
        return out, counts > 1


def sparse_mismatch(a: Sparse, b: Sparse, size: int, tol: float) -> np.ndarray:
    """Row mask where two combinations differ by more than ``tol`` in some coefficient."""
    diff = Sparse.concat([a, Sparse(b.rows, b.labels, -b.coefs)], a.labels if len(a.rows) else b.labels)
    diff = diff.merged(prune=tol)
    bad = np.zeros(size, dtype=bool)
    bad[diff.rows] = True
    return bad


# -- evaluators ----------------------------------------------------------------------

class Evaluator:
    """Batch operators of one representation."""

    compiled = False

    def __init__(self, rep: MonomialRep):
        self.rep = rep
        self.arity = rep.arity

    # subclasses: encode, label_of, act, emb, Q, R, U, strip, decode

    def apply_atom(self, atom: tuple, X: np.ndarray) -> Terms:
        kind, arg, dag = atom
        if kind == "gen":
            return self.act(arg, dag, X)
        if kind == "Q":
            return self.Q(X)
        if kind == "R":
            return self.R(arg, dag, X)
        if kind == "U":
            return self.U(dag, X)
        return self.emb(arg, dag, X)

    def apply_word(self, word: tuple, X: np.ndarray) -> Terms:
        t = Terms.basis(X)
        for atom in reversed(word):
            t = then(t, lambda L, a=atom: self.apply_atom(a, L))
        return t

    def combination(self, words: list, X: np.ndarray) -> Sparse:
        """sum_k coef_k * word_k applied row-wise to e_X, merged."""
        parts = [Sparse.from_terms(self.apply_word(w, X), scale=c) for c, w in words]
        return Sparse.concat(parts, X).merged()

    def compatible(self, other: "Evaluator") -> bool:
        """Whether label arrays of ``self`` can be compared with those of ``other``."""
        return self.compiled == other.compiled and getattr(self, "codec", None) == getattr(other, "codec", None)


class PythonEvaluator(Evaluator):
    """Reference evaluation, one label at a time."""

    def encode(self, labels: Sequence) -> np.ndarray:
        out = np.empty(len(labels), dtype=object)
        for k, x in enumerate(labels):
            out[k] = x
        return out

    def label_of(self, value):
        return value

    def _terms(self, fn, X: np.ndarray) -> Terms:
        n = len(X)
        out = Terms.empty_like(X, n)
        for k in range(n):
            x = X[k]
            try:
                t = fn(x)
            except MFLError as exc:
                raise BatchFailure(x, exc) from exc
            if t is not None:
                out.nonzero[k] = True
                out.phase[k] = t[0]
                out.label[k] = t[1]
        return out

    def act(self, i: int, adj: bool, X: np.ndarray) -> Terms:
        f = self.rep.apply_adjoint if adj else self.rep.apply
        return self._terms(lambda x: f(i, x), X)

    def emb(self, j: int, adj: bool, X: np.ndarray) -> Terms:
        return self._terms(lambda x: apply_word_generator(self.rep, j, x, adj), X)

    def Q(self, X: np.ndarray) -> Terms:
        return self._terms(lambda x: apply_Q(self.rep, x), X)

    def R(self, a: int, adj: bool, X: np.ndarray) -> Terms:
        return self._terms(lambda x: apply_R(self.rep, a, x, adj), X)

    def U(self, adj: bool, X: np.ndarray) -> Terms:
        return self._terms(lambda x: apply_U(self.rep, x, adj), X)

    def strip(self, X: np.ndarray):
        n = len(X)
        kind = np.zeros(n, dtype=np.int8)
        j = np.zeros(n, dtype=np.int64)
        phase = np.zeros(n, dtype=np.complex128)
        base = np.empty(n, dtype=object)
        for k in range(n):
            try:
                s = strip_classify(self.rep, X[k])
            except MFLError as exc:
                raise BatchFailure(X[k], exc) from exc
            if type(s) is InRange:
                kind[k], j[k], phase[k], base[k] = STRIP_IN, s.j, s.phase, s.base
            else:
                kind[k] = STRIP_NONE if s is NOT_IN_ANY_RANGE else STRIP_TAIL
        return kind, j, phase, base

    def decode(self, X: np.ndarray):
        n = len(X)
        found = np.zeros(n, dtype=bool)
        gen = np.zeros(n, dtype=np.int64)
        phase = np.zeros(n, dtype=np.complex128)
        pre = np.empty(n, dtype=object)
        for k in range(n):
            try:
                d = self.rep.range_decode(X[k])
            except MFLError as exc:
                raise BatchFailure(X[k], exc) from exc
            if d is not None:
                found[k], gen[k], phase[k], pre[k] = True, d[0], d[1], d[2]
        return found, gen, phase, pre


_ERRORS = {
    -1: StripDivergence,
    -2: KernelOverflow,
    -3: InternalConsistencyError,
    -4: InvalidGenerator,
}


class CompiledEvaluator(Evaluator):
    """Kernel-backed evaluation on int64 label codes."""

    compiled = True

    def __init__(self, rep: MonomialRep, bound: int | None = None):
        super().__init__(rep)
        if _ckernel is None:
            raise program.NotCompilable("compiled kernel not built")
        prog = program.compile_rep(rep)
        self.codec = prog.codec
        self.root = prog.root
        self.kernel = _ckernel.Kernel(prog.nodes, prog.parts, bound or max_strip_iters())
        self._ops = _ckernel.OPS

    def encode(self, labels: Sequence) -> np.ndarray:
        codec = self.codec
        try:
            return np.fromiter((program.encode(codec, x) for x in labels), dtype=np.int64, count=len(labels))
        except OverflowError as exc:
            raise KernelOverflow(f"label does not fit the int64 encoding: {exc}") from exc

    def label_of(self, value):
        return program.decode(self.codec, int(value))

    def _run(self, op: str, arg: int, adj: bool, X: np.ndarray):
        X = np.ascontiguousarray(X, dtype=np.int64)
        status, aux, phase, out = self.kernel.run(self.root, self._ops[op], arg, adj, X)
        if status.size and status.min() < 0:
            k = int(np.argmin(status))
            code = int(status[k])
            exc_type = _ERRORS.get(code, MFLError)
            label = self.label_of(X[k])
            raise BatchFailure(label, exc_type(f"kernel {op} failed on {label!r} (status {code})"))
        return status, aux, phase, out

    def _terms(self, op: str, arg: int, adj: bool, X: np.ndarray) -> Terms:
        status, _, phase, out = self._run(op, arg, adj, X)
        return Terms(status == 1, phase, out)

    def _check_gen(self, i: int) -> None:
        if type(i) is not int and not isinstance(i, np.integer) or i < 1 or (self.arity != INF and i > self.arity):
            raise InvalidGenerator(f"generator index {i!r} out of range")

    def act(self, i: int, adj: bool, X: np.ndarray) -> Terms:
        self._check_gen(i)
        return self._terms("act", i, adj, X)

    def emb(self, j: int, adj: bool, X: np.ndarray) -> Terms:
        if j < 1:
            raise InvalidGenerator(f"embedded index {j} must be >= 1")
        return self._terms("emb", j, adj, X)

    def Q(self, X: np.ndarray) -> Terms:
        return self._terms("Q", 0, False, X)

    def R(self, a: int, adj: bool, X: np.ndarray) -> Terms:
        if a < 0:
            raise ValueError(f"R index must be >= 0, got {a}")
        return self._terms("R", a, adj, X)

    def U(self, adj: bool, X: np.ndarray) -> Terms:
        if self.arity == INF:
            raise SignatureMismatch("U is defined for finite arity only")
        return self._terms("U", 0, adj, X)

    def strip(self, X: np.ndarray):
        status, aux, phase, out = self._run("strip", 0, False, X)
        return status, aux, phase, out

    def decode(self, X: np.ndarray):
        status, aux, phase, out = self._run("decode", 0, False, X)
        return status == 1, aux, phase, out


_CACHE: "OrderedDict[tuple, tuple]" = OrderedDict()
_CACHE_SIZE = 256


def get_evaluator(rep: MonomialRep, mode: str | None = None) -> Evaluator:
    """Evaluator for ``rep``: compiled when possible unless ``mode`` (or MFL_KERNEL) says python."""
    mode = mode or kernel_mode()
    bound = max_strip_iters()
    key = (id(rep), mode, bound)
    hit = _CACHE.get(key)
    if hit is not None and hit[0] is rep:
        _CACHE.move_to_end(key)
        return hit[1]
    ev: Evaluator
    if mode != "python" and _ckernel is not None:
        try:
            ev = CompiledEvaluator(rep, bound)
        except program.NotCompilable:
            if mode == "compiled":
                raise
            ev = PythonEvaluator(rep)
    elif mode == "compiled":
        raise program.NotCompilable("compiled kernel not built")
    else:
        ev = PythonEvaluator(rep)
    _CACHE[key] = (rep, ev)
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return ev


# -- direct-sum label helpers ----------------------------------------------------------

def split_sum(X: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Branch indices and inner labels of direct-sum labels."""
    if X.dtype == object:
        branch = np.fromiter((x[1] for x in X), dtype=np.int64, count=len(X))
        inner = np.empty(len(X), dtype=object)
        for k, x in enumerate(X):
            inner[k] = x[2]
        return branch, inner
    return X % K, X // K


def wrap_sum(branch: int, inner: np.ndarray, K: int) -> np.ndarray:
    """Direct-sum labels ``Pair(branch, x)`` for an array of inner labels."""
    if inner.dtype == object:
        out = np.empty(len(inner), dtype=object)
        for k, x in enumerate(inner):
            out[k] = None if x is None else Pair(branch, x)
        return out
    return np.where(inner >= 0, inner * K + branch, -1)


def wrap_terms(branch: int, t: Terms, K: int) -> Terms:
    return Terms(t.nonzero, t.phase, wrap_sum(branch, t.label, K))
