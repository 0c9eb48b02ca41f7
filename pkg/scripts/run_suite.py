#!/usr/bin/env python3
"""Run a scenario suite and write the JSON report next to a text summary."""

import argparse
import json
from pathlib import Path

from fbllab.scenarios import default_config, run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="suite JSON (default: bundled suite)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", default="reports/suite.json")
    args = ap.parse_args()
    cfg = json.loads(Path(args.config).read_text()) if args.config else default_config()
    suite = run_all(cfg, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(suite.to_json(), indent=2, sort_keys=True) + "\n")
    for r in suite.reports:
        print(f"{r.name:<26} {str(r.lattice):<26} {'PASS' if r.passed else 'FAIL'}")
    print(f"report written to {out}")
    return 0 if suite.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
