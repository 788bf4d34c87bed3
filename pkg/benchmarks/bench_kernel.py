"""Compiled kernel against the pure-Python evaluator.

Each case applies one batch operator to every label of a representation up
to ``--depth`` and reports the best of ``--repeat`` timings per engine and
the speed-up.  Results of the two engines are compared row by row before
timing, so a fast wrong kernel shows up as an error rather than a speed-up.
With ``--suite`` a reduced verify run (grid 2,3, depth 4) is also timed on
each engine.

    python3 benchmarks/bench_kernel.py --depth 5 --repeat 3 [--suite] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from mfl import parse_descriptor
from mfl.kernel import Terms, get_evaluator, kernel_available, terms_agree
from mfl.verify import SuiteConfig, run_suite, summarize

CASES = (
    ("std:5", "act", 5, False),
    ("cyc:4:4:i", "act", 4, True),
    ("sum(std:3,cyc:3:3:-1)", "act", 3, False),
    ("cyc:3:3:-1", "Q", 0, False),
    ("sum(std:4,cyc:4:4:-1)", "R", 2, False),
    ("F[3,2](cyc:2:2:-1)", "act", 3, False),
    ("F[5,3](sum(cyc:3:1:i,cyc:3:3:1))", "act", 5, True),
    ("F[4,2](F[2,5](sum(std:5,cyc:5:5:-1)))", "act", 4, False),
    ("Finf[3](F[3,4](cyc:4:4:1))", "act", 7, False),
    ("F[3,4](cyc:4:4:-1)", "U", 0, True),
)


@dataclass
class Row:
    rep: str
    op: str
    labels: int
    python_s: float
    compiled_s: float
    speedup: float


def _call(ev, op: str, arg: int, adj: bool, X) -> Terms:
    if op == "act":
        return ev.act(arg, adj, X)
    if op == "Q":
        return ev.Q(X)
    if op == "R":
        return ev.R(arg, adj, X)
    if op == "U":
        return ev.U(adj, X)
    raise ValueError(op)


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _same(pe, ce, tp: Terms, tc: Terms) -> bool:
    labels = np.empty(len(tc), dtype=object)
    for k in np.nonzero(tc.nonzero)[0]:
        labels[k] = ce.label_of(tc.label[k])
    return bool(terms_agree(tp, Terms(tc.nonzero, tc.phase, labels), 1e-12).all())


def run(depth: int, repeat: int) -> list[Row]:
    rows = []
    for desc, op, arg, adj in CASES:
        rep = parse_descriptor(desc)
        labels = rep.labels(depth)
        pe, ce = get_evaluator(rep, "python"), get_evaluator(rep, "compiled")
        Xp, Xc = pe.encode(labels), ce.encode(labels)
        if not _same(pe, ce, _call(pe, op, arg, adj, Xp), _call(ce, op, arg, adj, Xc)):
            raise SystemExit(f"engines disagree on {desc} {op}")
        # a fresh Python evaluator per run so its strip memo does not carry over
        tp = _best(lambda: _call(get_evaluator(parse_descriptor(desc), "python"), op, arg, adj,
                                 Xp), repeat)
        tc = _best(lambda: _call(ce, op, arg, adj, Xc), repeat)
        name = f"{op}[{arg}]{'*' if adj else ''}" if op in ("act", "R") else op + ("*" if adj else "")
        rows.append(Row(desc, name, len(labels), tp, tc, tp / tc if tc > 0 else float("inf")))
    return rows


def time_suite() -> dict:
    out = {}
    for mode in ("python", "compiled"):
        t0 = time.perf_counter()
        reports = run_suite(SuiteConfig(grid=(2, 3), depth=4, kernel=mode))
        out[mode] = (time.perf_counter() - t0, summarize(reports))
    return out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--depth", type=int, default=5, help="label enumeration depth (default 5)")
    p.add_argument("--repeat", type=int, default=3, help="timings per engine, best is kept (default 3)")
    p.add_argument("--suite", action="store_true", help="also time a reduced verify run on both engines")
    p.add_argument("--json", help="also write the rows as JSON")
    args = p.parse_args()
    if not kernel_available():
        raise SystemExit("compiled kernel not built; reinstall with Cython available")
    rows = run(args.depth, args.repeat)
    width = max(len(r.rep) for r in rows)
    print(f"{'representation':<{width}}  {'op':<8} {'labels':>7} {'python':>10} {'compiled':>10} {'speed-up':>9}")
    for r in rows:
        print(f"{r.rep:<{width}}  {r.op:<8} {r.labels:>7} {r.python_s * 1e3:>8.2f}ms {r.compiled_s * 1e3:>8.3f}ms "
              f"{r.speedup:>8.0f}x")
    total_p = sum(r.python_s for r in rows)
    total_c = sum(r.compiled_s for r in rows)
    print(f"total: python {total_p:.3f}s, compiled {total_c:.4f}s, overall speed-up {total_p / total_c:.0f}x")
    doc = {"depth": args.depth, "rows": [asdict(r) for r in rows]}
    if args.suite:
        suite = time_suite()
        for mode, (secs, counts) in suite.items():
            print(f"verify grid 2,3 depth 4 on {mode:<8}: {secs:6.2f}s {counts}")
        print(f"verify speed-up {suite['python'][0] / suite['compiled'][0]:.1f}x")
        doc["suite"] = {mode: {"seconds": secs, "summary": counts} for mode, (secs, counts) in suite.items()}
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)


if __name__ == "__main__":
    main()
