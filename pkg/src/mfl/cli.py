"""Command-line interface: ``mfl <command> ...``.

Commands::

    reps        list the descriptor grammar and the built-in catalog
    eval        evaluate an operator expression on a basis vector
    functor     apply a functor image's generator to a basis vector
    closedform  evaluate the closed-form presentation of F_{n,m}(pi)(s_j)
    table       dump a truncated action table as JSON or CSV
    verify      run the property suite

Labels are given and printed in their JSON form (``{"int": 5}``,
``{"word": [1, 2]}``, ``{"pair": [0, {"int": 3}]}``); a bare integer is
accepted as shorthand for ``{"int": n}``.  The environment variable
``MFL_MAX_STRIP_ITERS`` overrides the strip bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .closedform import classify_case, closed_generator_apply
from .descriptors import CATALOG_HELP, parse_descriptor
from .errors import MFLError
from .exprlang import evaluate, parse
from .functor import FunctorSpec, functor_apply
from .labels import label_from_json, label_to_json, sort_key
from .repcore import format_term, parse_arity, term_to_json
from .seriesops import max_strip_iters

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=indent)


def _label_arg(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MFLError(f"--vector is not valid JSON: {exc}") from exc
    if type(obj) is int and obj >= 0:
        return obj
    try:
        return label_from_json(obj)
    except ValueError as exc:
        raise MFLError(str(exc)) from exc


def _rep_arg(text: str):
    return parse_descriptor(text)


def _check_label(rep, x) -> None:
    if not rep.is_label(x):
        raise MFLError(f"{label_to_json(x)} is not a basis label of {rep.descriptor}")


def _generator_out(rep, i: int, adjoint: bool, x):
    rep.check_generator(i)
    return rep.apply_adjoint(i, x) if adjoint else rep.apply(i, x)


# -- reps ---------------------------------------------------------------------------

def _builtin_catalog() -> list[dict]:
    from .verify.core import DEFAULT_CATALOG, DEFAULT_GRID
    out = [{"arity": "inf", "descriptor": "free:inf"}]
    for n in DEFAULT_GRID:
        for template in DEFAULT_CATALOG:
            out.append({"arity": str(n), "descriptor": template.format(n=n)})
    return out


def cmd_reps(args) -> int:
    catalog = _builtin_catalog()
    if args.json:
        grammar = [line.strip() for line in CATALOG_HELP.splitlines()[1:] if line.startswith("  ")]
        print(_dumps({"grammar": grammar, "builtins": catalog, "strip_bound": max_strip_iters()}))
        return EXIT_OK
    print(CATALOG_HELP, end="")
    print("\nBuilt-in catalog (verify default):")
    for entry in catalog:
        print(f"  {entry['descriptor']}")
    print("\nFunctor images nest, e.g. F[2,3](F[3,4](std:4)) or Finf[3](sum(std:3,cyc:3:3:-1)).")
    return EXIT_OK


# -- eval / functor / closedform -------------------------------------------------------

def cmd_eval(args) -> int:
    rep = _rep_arg(args.rep)
    x = _label_arg(args.vector)
    _check_label(rep, x)
    v = evaluate(parse(args.expr), rep, x)
    print(_dumps(v.to_json(), indent=None))
    return EXIT_OK


def cmd_functor(args) -> int:
    spec = FunctorSpec(parse_arity(args.to), parse_arity(args.source))
    image = functor_apply(spec, _rep_arg(args.rep))
    x = _label_arg(args.vector)
    _check_label(image, x)
    term = _generator_out(image, args.generator, args.adjoint, x)
    print(_dumps({
        "rep": image.descriptor,
        "generator": args.generator,
        "adjoint": args.adjoint,
        "in": label_to_json(x),
        "out": term_to_json(term),
    }, indent=None))
    return EXIT_OK


def cmd_closedform(args) -> int:
    n, m = int(args.to), int(args.source)
    rep = _rep_arg(args.rep)
    x = _label_arg(args.vector)
    _check_label(rep, x)
    case = classify_case(n, m)
    closed = closed_generator_apply(case, rep, args.generator, x)
    result = {
        "case": {"tag": case.tag, "k0": case.k0, "j0": case.j0},
        "rep": rep.descriptor,
        "generator": args.generator,
        "in": label_to_json(x),
        "closed_form": term_to_json(closed),
    }
    if not args.compare:
        print(_dumps(result, indent=None))
        return EXIT_OK
    image = functor_apply(FunctorSpec(n, m), rep)
    constructive = image.apply(args.generator, x)
    same = _same_term(closed, constructive)
    result["constructive"] = term_to_json(constructive)
    result["verdict"] = "match" if same else "mismatch"
    print(_dumps(result, indent=None))
    print(f"constructive {format_term(constructive)}  closed form {format_term(closed)}  -> {result['verdict']}",
          file=sys.stderr)
    return EXIT_OK if same else EXIT_FAIL


def _same_term(a, b, tol: float = 1e-9) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a[1] == b[1] and abs(a[0] - b[0]) <= tol


# -- table ----------------------------------------------------------------------------

def action_table(rep, generator: int, adjoint: bool, depth: int) -> dict:
    """Rows (label, term) of one generator over the enumerated labels up to ``depth``."""
    rep.check_generator(generator)
    labels = sorted(rep.labels(depth), key=sort_key)
    rows = []
    for x in labels:
        term = rep.apply_adjoint(generator, x) if adjoint else rep.apply(generator, x)
        rows.append({"in": label_to_json(x), "out": term_to_json(term)})
    return {"rep": rep.descriptor, "gen": generator, "adjoint": adjoint, "depth": depth, "rows": rows}


def _table_csv(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["in", "phase_re", "phase_im", "out"])
    for row in table["rows"]:
        src = json.dumps(row["in"], separators=(",", ":"))
        out = row["out"]
        if out is None:
            w.writerow([src, "", "", ""])
        else:
            w.writerow([src, repr(out["phase"][0]), repr(out["phase"][1]),
                        json.dumps(out["label"], separators=(",", ":"))])
    return buf.getvalue()


def cmd_table(args) -> int:
    rep = _rep_arg(args.rep)
    table = action_table(rep, args.generator, args.adjoint, args.depth)
    text = _dumps(table) + "\n" if args.format == "json" else _table_csv(table)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise MFLError(f"cannot write {args.out}: {exc}") from exc
        print(f"wrote {len(table['rows'])} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def _grid_arg(text: str) -> tuple:
    try:
        grid = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers, got {text!r}") from exc
    if not grid:
        raise argparse.ArgumentTypeError("grid is empty")
    return grid


def cmd_verify(args) -> int:
    from .verify import FAIL, FINDING, PASS, VACUOUS, SuiteConfig, iter_reports, summarize

    config = SuiteConfig(grid=args.grid, depth=args.depth, suites=tuple(args.suite), kernel=args.kernel)
    reports = []
    for r in iter_reports(config):
        reports.append(r)
        if r.status in (FAIL, FINDING) and not args.quiet:
            where = f"{r.rep} [{r.arities}]"
            print(f"{r.status.upper():8s} {r.name}  {where}  {r.detail}".rstrip())
    counts = summarize(reports)
    if not args.quiet:
        _print_groups(reports, (PASS, FAIL, FINDING, VACUOUS))
    print(f"pass {counts[PASS]}  fail {counts[FAIL]}  finding {counts[FINDING]}  vacuous {counts[VACUOUS]}")
    if args.json:
        doc = {
            "config": {"grid": list(config.grid), "depth": config.depth, "suites": list(config.suites),
                       "tolerance": config.tolerance, "jbound": config.jbound,
                       "strip_bound": max_strip_iters()},
            "summary": counts,
            "reports": [r.to_json() for r in reports],
        }
        text = _dumps(doc)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    if counts[FAIL] or (args.strict_findings and counts[FINDING]):
        return EXIT_FAIL
    return EXIT_OK


def _print_groups(reports, statuses) -> None:
    per: dict = {}
    for r in reports:
        row = per.setdefault(r.name, dict.fromkeys(statuses, 0))
        row[r.status] += 1
    width = max((len(k) for k in per), default=10)
    for name, row in per.items():
        cells = "  ".join(f"{s} {row[s]}" for s in statuses if row[s])
        print(f"  {name:<{width}}  {cells}")


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mfl", description="Monomial representations of Cuntz algebras and the "
                                "functors between them.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reps", help="list descriptor grammar and built-in representations")
    s.add_argument("--json", action="store_true", help="machine-readable catalog")
    s.set_defaults(fn=cmd_reps)

    s = sub.add_parser("eval", help="evaluate an operator expression on a basis vector")
    s.add_argument("--rep", required=True, help="representation descriptor")
    s.add_argument("--expr", required=True, help='expression, e.g. "s1 s2\' + R[1]"')
    s.add_argument("--vector", required=True, help="basis label as JSON")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("functor", help="apply a generator of a functor image")
    s.add_argument("--to", required=True, help="target arity n or inf")
    s.add_argument("--from", dest="source", required=True, help="source arity m or inf")
    s.add_argument("--rep", required=True, help="source representation descriptor")
    s.add_argument("--vector", required=True, help="basis label as JSON")
    s.add_argument("--generator", type=int, required=True)
    s.add_argument("--adjoint", action="store_true")
    s.set_defaults(fn=cmd_functor)

    s = sub.add_parser("closedform", help="closed-form value of F_{n,m}(pi)(s_j) on a basis vector")
    s.add_argument("--to", required=True, help="target arity n")
    s.add_argument("--from", dest="source", required=True, help="source arity m")
    s.add_argument("--rep", required=True, help="O_m representation descriptor")
    s.add_argument("--generator", type=int, required=True)
    s.add_argument("--vector", required=True, help="basis label as JSON")
    s.add_argument("--compare", action="store_true", help="also run the constructive functor and compare")
    s.set_defaults(fn=cmd_closedform)

    s = sub.add_parser("table", help="truncated action table of one generator")
    s.add_argument("--rep", required=True, help="representation descriptor")
    s.add_argument("--generator", type=int, required=True)
    s.add_argument("--adjoint", action="store_true")
    s.add_argument("--depth", type=int, default=3, help="label enumeration depth (default 3)")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(fn=cmd_table)

    s = sub.add_parser("verify", help="run the property suite")
    s.add_argument("--suite", action="append", default=None,
                   help="check name, group or 'all' (repeatable; default all)")
    s.add_argument("--depth", type=int, default=5, help="sample depth (default 5)")
    s.add_argument("--grid", type=_grid_arg, default=(2, 3, 4, 5), help="arity grid (default 2,3,4,5)")
    s.add_argument("--json", metavar="PATH", help="write the full report as JSON ('-' for stdout)")
    s.add_argument("--strict-findings", action="store_true", help="exit non-zero on findings as well")
    s.add_argument("--kernel", choices=("auto", "compiled", "python"), default=None,
                   help="evaluation engine (default: MFL_KERNEL or auto)")
    s.add_argument("--quiet", action="store_true", help="print only the summary line")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "suite", "") is None:
        args.suite = ["all"]
    if getattr(args, "depth", 1) < 1:
        parser.error("--depth must be >= 1")
    try:
        return args.fn(args)
    except (MFLError, ValueError) as exc:
        print(f"mfl: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
