"""Run the check suite section by section and print a timing table.

    python3 scripts/run_suite.py --cases 200
    python3 scripts/run_suite.py --sections lift bc --json report.json
"""

from __future__ import annotations

import argparse
import json
import time

from awfslab.cli import SECTIONS, CorpusConfig, dumps, render


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cases", type=int, default=60)
    parser.add_argument("--sections", nargs="+", choices=sorted(SECTIONS), default=list(SECTIONS))
    parser.add_argument("--json", help="also write the reports to this file")
    args = parser.parse_args()

    cfg = CorpusConfig(seed=args.seed, cases=args.cases)
    rows, out = [], {}
    total = time.perf_counter()
    for name in args.sections:
        start = time.perf_counter()
        reports = SECTIONS[name](cfg)
        elapsed = time.perf_counter() - start
        for law, report in reports.items():
            rows.append((name, law, len(report), elapsed))
            out[f"{name}: {law}"] = [[v.law, *map(render, v.witness)] for v in report.violations]
    for name, law, count, elapsed in rows:
        print(f"{name:<12} {law:<45} {count:>4} violations {elapsed:7.1f}s")
    print(f"total {time.perf_counter() - total:.1f}s")
    if args.json:
        with open(args.json, "wb") as fh:
            fh.write(dumps(out))
    return 0 if all(count == 0 for _, _, count, _ in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
