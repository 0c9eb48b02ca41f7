"""Command-line interface: ``fbllab <command> ...``.

JSON is the canonical output; ``--output text`` prints aligned tables.  The
exit status is 0 exactly when every check passes.  Reports are also written
under ``$FBLLAB_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import dual as D
from . import expr as E
from . import lattice as LT
from . import norms as N
from .errors import FBLError
from .scenarios import SCENARIOS, ScenarioReport, SuiteReport, run_all, run_scenario

OUTPUT_ENV = "FBLLAB_OUTPUT_DIR"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read_json(arg: str):
    """Inline JSON, or a path to a JSON file."""
    p = Path(arg)
    if p.exists():
        return json.loads(p.read_text())
    return json.loads(arg)


def _load_expr(L: LT.FiniteLattice, arg: str) -> E.Expr:
    return E.from_json(L, _read_json(arg))


def _table(rows: list[list[str]], header: list[str]) -> str:
    cols = [header] + rows
    widths = [max(len(str(r[i])) for r in cols) for i in range(len(header))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    lines = [fmt.format(*header), fmt.format(*["-" * w for w in widths])]
    lines += [fmt.format(*[str(c) for c in r]) for r in rows]
    return "\n".join(lines)


def _report_text(rep: ScenarioReport) -> str:
    head = f"scenario {rep.name}  lattice {rep.lattice}  seed {rep.seed}  " \
           f"{'PASS' if rep.passed else 'FAIL'}"
    if rep.error:
        return head + f"\n  error: {rep.error}"
    rows = [[("ok" if c.passed else "FAIL"), c.description, _short(c.expected), _short(c.observed),
             c.provenance] for c in rep.checks]
    out = head + "\n" + _table(rows, ["", "check", "expected", "observed", "provenance"])
    for cav in rep.caveats:
        out += f"\n  caveat: {cav}"
    return out


def _short(v, width: int = 40) -> str:
    s = str(v)
    return s if len(s) <= width else s[: width - 1] + "…"


def _emit(payload: dict, text: str, fmt: str, stem: str) -> None:
    body = json.dumps(payload, indent=2, sort_keys=True)
    print(body if fmt == "json" else text)
    out_dir = os.environ.get(OUTPUT_ENV)
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{stem}.json").write_text(body + "\n")


# -- commands ---------------------------------------------------------------------------------

def cmd_scenario(args) -> int:
    params = dict(_read_json(args.params)) if args.params else {}
    if args.lattice:
        params["lattice"] = args.lattice
    if args.hom:
        params["hom"] = args.hom
    if args.eps is not None:
        params["eps"] = str(args.eps)
    rep = run_scenario(args.name, params, args.seed)
    _emit(rep.to_json(), _report_text(rep), args.output, f"scenario-{args.name}")
    return 0 if rep.passed else 1


def cmd_run_all(args) -> int:
    suite: SuiteReport = run_all(args.config, jobs=args.jobs, seed=args.seed)
    text = "\n\n".join(_report_text(r) for r in suite.reports)
    for e in suite.errors:
        text += f"\n\nscenario {e['scenario']}  ERROR  {e['error']}"
    rows = [[r.name, r.lattice, "PASS" if r.passed else "FAIL", len(r.checks)] for r in suite.reports]
    text += "\n\n" + _table(rows, ["scenario", "lattice", "result", "checks"])
    text += f"\n\nsuite {'PASS' if suite.passed else 'FAIL'}"
    _emit(suite.to_json(), text, args.output, "suite")
    return 0 if suite.passed else 1


def cmd_eval(args) -> int:
    L = LT.load_lattice(args.lattice)
    f = _load_expr(L, args.expr)
    x = D.point_from_json(L, _read_json(args.point))
    v = E.evaluate(f, x)
    _emit({"expr": E.to_string(f), "value": str(v)}, f"{E.to_string(f)} = {v}", args.output, "eval")
    return 0


def cmd_sup_norm(args) -> int:
    L = LT.load_lattice(args.lattice)
    f = _load_expr(L, args.expr)
    c = N.sup_norm(f, args.eps, node_budget=args.budget)
    text = _table([[str(c.value_low), str(c.value_high), c.nodes, c.budget_exceeded]],
                  ["low", "high", "nodes", "budget_exceeded"])
    _emit(c.to_json(), text, args.output, "sup-norm")
    return 0 if not c.budget_exceeded else 1


def cmd_free_norm(args) -> int:
    L = LT.load_lattice(args.lattice)
    f = _load_expr(L, args.expr)
    est = N.free_norm(f, args.m, vertex_cap=args.budget, starts=args.starts,
                      iterations=args.iterations, seed=args.seed)
    ok = est.verify(f)
    upper = "inf" if est.upper is None else str(est.upper)
    text = _table([[str(est.lower), upper, str(est.objective), str(est.constraint), len(est.witness), ok]],
                  ["lower", "upper", "objective", "constraint", "witness size", "verified"])
    _emit(est.to_json(), text, args.output, "free-norm")
    return 0 if ok else 1


def cmd_dual_cells(args) -> int:
    L = LT.load_lattice(args.lattice)
    cells = D.enumerate_cells(L)
    rows = [[c.index, " < ".join(L.elements[p] for p in c.chain), c.dim,
             " ".join(f"{L.elements[z]}:{c.levels[z]}" for z in range(len(L)))] for c in cells]
    payload = {"lattice": L.name, "cells": [
        {"index": c.index, "chain": [L.elements[p] for p in c.chain], "dim": c.dim,
         "levels": {L.elements[z]: c.levels[z] for z in range(len(L))}} for c in cells]}
    _emit(payload, _table(rows, ["cell", "chain", "coords", "levels"]), args.output, "dual-cells")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fbllab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--output", choices=("json", "text"), default="text")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("scenario", help="run one named scenario")
    sp.add_argument("name", choices=sorted(SCENARIOS))
    sp.add_argument("--lattice", help="lattice JSON file or built-in name such as chain(4)")
    sp.add_argument("--hom", help="lattice homomorphism JSON file")
    sp.add_argument("--eps", type=_fraction)
    sp.add_argument("--params", help="extra parameters as inline JSON or a JSON file")
    common(sp)
    sp.set_defaults(func=cmd_scenario)

    sp = sub.add_parser("run-all", help="run a suite configuration")
    sp.add_argument("--config", help="suite JSON; defaults to the bundled suite")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, help="override the seed stored in the config")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_run_all)

    sp = sub.add_parser("eval", help="evaluate an expression at a dual point")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--point", required=True)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sup-norm", help="certified sup-norm over the dual")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--eps", type=_fraction, default=N.DEFAULT_EPS)
    sp.add_argument("--budget", type=int, default=N.DEFAULT_NODE_BUDGET)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_sup_norm)

    sp = sub.add_parser("free-norm", help="certified free-norm bounds")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--m", type=int, default=4, help="largest witness tuple size")
    sp.add_argument("--budget", type=int, default=10**6, help="cap on vertex tuples")
    sp.add_argument("--starts", type=int, default=64)
    sp.add_argument("--iterations", type=int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_free_norm)

    sp = sub.add_parser("dual-cells", help="list the cells of the dual complex")
    sp.add_argument("--lattice", required=True)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_dual_cells)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FBLError, json.JSONDecodeError, OSError) as exc:
        print(f"fbllab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
