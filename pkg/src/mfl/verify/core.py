"""Suite configuration, reports and the machinery that runs checks."""

from __future__ import annotations

import time
from collections import OrderedDict
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from ..descriptors import parse_descriptor
from ..errors import DescriptorError, KernelOverflow, MFLError
from ..functor import _Image
from ..kernel import BatchFailure, Evaluator, Terms, get_evaluator, terms_agree
from ..labels import label_to_json
from ..repcore import INF, MonomialRep, arity_text, direct_sum, make_free_infinity_rep

PASS, FAIL, FINDING, VACUOUS = "pass", "fail", "finding", "vacuous"

DEFAULT_GRID = (2, 3, 4, 5)
DEFAULT_CATALOG = (
    "std:{n}",
    "cyc:{n}:1:1", "cyc:{n}:1:-1", "cyc:{n}:1:i",
    "cyc:{n}:{n}:1", "cyc:{n}:{n}:-1", "cyc:{n}:{n}:i",
)


@dataclass(frozen=True)
class SuiteConfig:
    """What to verify and at which scale.

    ``catalog`` holds descriptor templates; ``{n}`` is replaced by each arity of
    the grid, and a template without it is used only at its own arity.  With
    ``pairwise_sums`` every unordered pair of distinct catalog entries is added
    as a two-fold direct sum.
    """

    grid: tuple = DEFAULT_GRID
    depth: int = 5
    catalog: tuple = DEFAULT_CATALOG
    pairwise_sums: bool = True
    tolerance: float = 1e-9
    jbound: int = 12
    suites: tuple = ("all",)
    kernel: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(sorted(set(int(n) for n in self.grid))))
        object.__setattr__(self, "catalog", tuple(self.catalog))
        object.__setattr__(self, "suites", tuple(self.suites))
        if self.depth < 1:
            raise ValueError(f"sample depth must be >= 1, got {self.depth}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.jbound < 1:
            raise ValueError(f"j-bound must be >= 1, got {self.jbound}")
        if any(n < 2 for n in self.grid):
            raise ValueError(f"grid arities must be >= 2, got {self.grid}")


@dataclass
class CheckReport:
    name: str
    anchor: str
    status: str
    rep: str = "-"
    arities: str = "-"
    samples: int = 0
    counterexample: Optional[dict] = None
    detail: str = ""
    seconds: float = 0.0
    engine: str = "-"

    def to_json(self) -> dict:
        return asdict(self)

    def key(self) -> tuple:
        """Everything except timing and engine, for determinism comparisons."""
        return (self.name, self.anchor, self.status, self.rep, self.arities, self.samples,
                repr(self.counterexample), self.detail)


# -- check registry ----------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    fn: Callable
    expect: str = PASS  # FINDING: a mismatch is the documented outcome

    @property
    def group(self) -> str:
        return self.name.split(".", 1)[0]


CHECKS: list[Check] = []


def check(name: str, anchor: str, expect: str = PASS):
    def deco(fn):
        CHECKS.append(Check(name, anchor, fn, expect))
        return fn
    return deco


@dataclass
class Case:
    rep: str
    arities: str
    body: Callable  # body(engine) -> None | "vacuous" | counterexample dict
    detail: str = ""
    samples: int = 0


# -- context -----------------------------------------------------------------------

def _space_root(rep: MonomialRep) -> MonomialRep:
    while isinstance(rep, _Image):
        rep = rep.source
    return rep


class ResultCache:
    """Byte-bounded LRU of operator results on the shared sample arrays.

    Many checks apply the same operator of the same representation to the
    same sample set.  Only calls whose input is one of the context's sample
    arrays are cached, keyed by descriptor, engine and operation; cached
    arrays are made read-only so a stray in-place update fails loudly.
    """

    def __init__(self, max_bytes: int = 128 << 20):
        self.max_bytes = max_bytes
        self.used = 0
        self._items: OrderedDict = OrderedDict()

    def get(self, key):
        hit = self._items.get(key)
        if hit is not None:
            self._items.move_to_end(key)
            return hit[0]
        return None

    def put(self, key, value, nbytes: int) -> None:
        if nbytes > self.max_bytes:
            return
        self._items[key] = (value, nbytes)
        self.used += nbytes
        while self.used > self.max_bytes:
            _, (_, size) = self._items.popitem(last=False)
            self.used -= size


def _freeze(value):
    arrays = value if isinstance(value, tuple) else (value.nonzero, value.phase, value.label)
    for a in arrays:
        a.setflags(write=False)
    return sum(a.nbytes for a in arrays)


class CachedEvaluator:
    """An evaluator whose results on sample arrays go through a :class:`ResultCache`."""

    _CACHED = ("act", "emb", "Q", "R", "U", "strip", "decode")

    def __init__(self, ev: Evaluator, ctx: "Context"):
        self._ev = ev
        self._ctx = ctx
        self._prefix = (ev.rep.descriptor, ev.compiled)

    def __getattr__(self, name):
        attr = getattr(self._ev, name)
        if name not in self._CACHED:
            return attr

        def call(*args):
            X = args[-1]
            if not self._ctx.is_sample(X):
                return attr(*args)
            key = self._prefix + (name,) + tuple(args[:-1]) + (id(X),)
            hit = self._ctx.results.get(key)
            if hit is None:
                hit = attr(*args)
                self._ctx.results.put(key, hit, _freeze(hit))
            return hit
        return call

    def compatible(self, other) -> bool:
        return self._ev.compatible(getattr(other, "_ev", other))

    @property
    def evaluator(self) -> Evaluator:
        return self._ev


class Context:
    """Catalogs and sample sets shared by all checks of one run."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.tol = config.tolerance
        self._catalog: dict = {}
        self._base: dict = {}
        self._inf: list | None = None
        self._labels: dict = {}
        self._encoded: dict = {}
        self._sample_ids: set = set()
        self.results = ResultCache()

    # catalogs
    def base_catalog(self, n: int) -> list[MonomialRep]:
        if n not in self._base:
            out = []
            for tpl in self.config.catalog:
                if "{n}" not in tpl:
                    try:
                        rep = parse_descriptor(tpl)
                    except DescriptorError:
                        continue
                    if rep.arity == n:
                        out.append(rep)
                    continue
                try:
                    out.append(parse_descriptor(tpl.replace("{n}", str(n))))
                except MFLError:
                    continue
            self._base[n] = out
        return self._base[n]

    def catalog(self, n: int) -> list[MonomialRep]:
        if n not in self._catalog:
            base = self.base_catalog(n)
            reps = list(base)
            if self.config.pairwise_sums:
                for a in range(len(base)):
                    for b in range(a + 1, len(base)):
                        reps.append(direct_sum([base[a], base[b]]))
            self._catalog[n] = reps
        return self._catalog[n]

    def sum_catalog(self, n: int) -> list[MonomialRep]:
        """Two- and three-fold sums for the direct-sum checks."""
        base = self.base_catalog(n)
        sums = [r for r in self.catalog(n) if len(getattr(r, "parts", ())) == 2]
        if len(base) >= 3:
            sums.append(direct_sum([base[0], base[-1], base[len(base) // 2]]))
            sums.append(direct_sum([base[-1], base[-2], base[-1]]))
        return sums

    def inf_catalog(self) -> list[MonomialRep]:
        """free:inf plus restrictions of the base catalog to O_inf."""
        if self._inf is None:
            from ..functor import functor_restrict
            reps = [make_free_infinity_rep()]
            for k in self.config.grid:
                reps.extend(functor_restrict(k, r) for r in self.base_catalog(k))
            self._inf = reps
        return self._inf

    # samples
    def labels(self, rep: MonomialRep) -> list:
        root = _space_root(rep)
        key = id(root)
        hit = self._labels.get(key)
        if hit is None or hit[0] is not root:
            hit = (root, root.labels(self.config.depth))
            self._labels[key] = hit
        return hit[1]

    def X(self, ev: Evaluator) -> np.ndarray:
        root = _space_root(ev.rep)
        key = (id(root), ev.compiled, getattr(ev, "codec", None))
        hit = self._encoded.get(key)
        if hit is None or hit[0] is not root:
            hit = (root, ev.encode(self.labels(root)))
            hit[1].setflags(write=False)
            self._encoded[key] = hit
            self._sample_ids.add(id(hit[1]))
        return hit[1]

    def is_sample(self, X) -> bool:
        return id(X) in self._sample_ids


class Engine:
    """Evaluator access for one case, in compiled or python mode."""

    def __init__(self, ctx: Context, mode: Optional[str]):
        self.ctx = ctx
        self.mode = mode
        self.tol = ctx.tol
        self.used_compiled = False

    def ev(self, rep: MonomialRep) -> Evaluator:
        e = get_evaluator(rep, self.mode)
        self.used_compiled |= e.compiled
        return CachedEvaluator(e, self.ctx)

    def python(self, rep: MonomialRep) -> CachedEvaluator:
        """The reference evaluator, for representations the kernel cannot pair up."""
        return CachedEvaluator(get_evaluator(rep, "python"), self.ctx)

    def X(self, ev: Evaluator) -> np.ndarray:
        return self.ctx.X(ev)

    def pair(self, a: MonomialRep, b: MonomialRep) -> tuple[Evaluator, Evaluator]:
        """Evaluators for two representations on one label space, with comparable encodings."""
        ea, eb = self.ev(a), self.ev(b)
        if not ea.compatible(eb):
            ea, eb = self.python(a), self.python(b)
        return ea, eb

    # comparisons
    def term_json(self, ev: Evaluator, t: Terms, k: int):
        if not t.nonzero[k]:
            return None
        p = complex(t.phase[k])
        return {"phase": [p.real, p.imag], "label": label_to_json(ev.label_of(t.label[k]))}

    def compare(self, ev: Evaluator, X: np.ndarray, actual: Terms, expected: Terms, relation: str,
                generator=None, adjoint=None, ev_expected: Evaluator | None = None) -> Optional[dict]:
        ok = terms_agree(actual, expected, self.tol)
        if ok.all():
            return None
        k = int(np.argmin(ok))
        return self.counterexample(ev, X[k], relation, generator, adjoint,
                                   expected=self.term_json(ev_expected or ev, expected, k),
                                   actual=self.term_json(ev, actual, k))

    def counterexample(self, ev: Evaluator, code, relation: str, generator=None, adjoint=None,
                       expected=None, actual=None) -> dict:
        return {
            "rep": ev.rep.descriptor,
            "label": label_to_json(ev.label_of(code)),
            "relation": relation,
            "generator": generator,
            "adjoint": adjoint,
            "expected": expected,
            "actual": actual,
        }


def arities_text(**kw) -> str:
    return ",".join(f"{k}={arity_text(v)}" for k, v in kw.items())


# -- running -------------------------------------------------------------------------

def _run_case(ctx: Context, chk: Check, case: Case) -> CheckReport:
    mode = ctx.config.kernel
    t0 = time.perf_counter()
    engine = Engine(ctx, mode)
    try:
        try:
            cex = case.body(engine)
        except (KernelOverflow, BatchFailure) as exc:
            cause = getattr(exc, "cause", exc)
            if not isinstance(cause, KernelOverflow):
                raise
            engine = Engine(ctx, "python")
            cex = case.body(engine)
        error = None
    except BatchFailure as exc:
        cex = {"rep": case.rep, "label": _safe_label(exc.label), "relation": "evaluation error",
               "error": f"{type(exc.cause).__name__}: {exc.cause}"}
        error = exc
    except MFLError as exc:
        cex = {"rep": case.rep, "label": None, "relation": "evaluation error",
               "error": f"{type(exc).__name__}: {exc}"}
        error = exc
    seconds = time.perf_counter() - t0
    detail = case.detail
    if cex == "vacuous":
        status, cex = VACUOUS, None
    elif cex is None:
        if chk.expect == FINDING:
            status = FAIL
            detail = (detail + "; " if detail else "") + "documented discrepancy not observed"
        else:
            status = PASS
    elif chk.expect == FINDING and error is None:
        status = FINDING
    else:
        status = FAIL
    engine_name = "compiled" if engine.used_compiled else "python"
    return CheckReport(chk.name, chk.anchor, status, case.rep, case.arities,
                       case.samples, cex, detail, round(seconds, 6), engine_name)


def _safe_label(label):
    try:
        return label_to_json(label)
    except Exception:  # noqa: BLE001 - best effort for the report
        return repr(label)


def selected(checks: list[Check], suites: tuple) -> list[Check]:
    if not suites or "all" in suites:
        return list(checks)
    out = []
    for c in checks:
        for s in suites:
            if c.name == s or c.group == s or c.name.startswith(s + "."):
                out.append(c)
                break
    return out


def iter_reports(config: SuiteConfig) -> Iterator[CheckReport]:
    from . import checks  # noqa: F401 - registers the checks

    ctx = Context(config)
    for chk in selected(CHECKS, config.suites):
        any_case = False
        for case in chk.fn(ctx):
            any_case = True
            yield _run_case(ctx, chk, case)
        if not any_case:
            yield CheckReport(chk.name, chk.anchor, VACUOUS, detail="no representation in the catalog for this check")


def run_suite(config: SuiteConfig | None = None) -> list[CheckReport]:
    """Run every selected check; one report per (check, representation, arity tuple)."""
    return list(iter_reports(config or SuiteConfig()))


def summarize(reports: list[CheckReport]) -> dict:
    counts = {PASS: 0, FAIL: 0, FINDING: 0, VACUOUS: 0}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    return counts


__all__ = [
    "PASS", "FAIL", "FINDING", "VACUOUS", "SuiteConfig", "CheckReport", "Check", "Case", "CHECKS",
    "check", "Context", "Engine", "run_suite", "iter_reports", "summarize", "arities_text", "INF",
]
