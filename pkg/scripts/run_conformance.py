#!/usr/bin/env python3
"""Sweep the program corpus size by size and compare the two semantics.

Prints one summary line per program size plus a total.  Exit status follows
the CLI convention: 0 all agree, 3 some case ran out of fuel, 4 disagreement.
"""

import argparse
import json
import sys
import time

from revflow import rint
from revflow.conformance import (
    ConformanceReport,
    check_soundness_adequacy,
    enumerate_programs,
    program_size,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=5,
                    help="largest program size to include (default 5)")
    ap.add_argument("--k", type=int, default=2, help="number of variables")
    ap.add_argument("--m", type=int, default=5, help="store modulus")
    ap.add_argument("--fuel", type=int, default=10000,
                    help="step budget per operational run")
    ap.add_argument("--json", metavar="OUT",
                    help="also write the combined report as JSON ('-' = stdout)")
    args = ap.parse_args(argv)

    env = rint.semantic_env(args.k, args.m)
    by_size: dict[int, ConformanceReport] = {}
    t0 = time.monotonic()
    for prog in enumerate_programs(args.max_size, args.k):
        rep = by_size.setdefault(program_size(prog), ConformanceReport())
        check_soundness_adequacy(prog, args.m, args.fuel, report=rep, env=env)
    dt = time.monotonic() - t0

    combined = ConformanceReport()
    for size in sorted(by_size):
        rep = by_size[size]
        combined.cases.extend(rep.cases)
        print(f"size {size}: cases {len(rep.cases):6d}  agree {rep.agree:6d}  "
              f"disagree {rep.disagree}  unknown {rep.unknown}")
    print(f"total: cases {len(combined.cases)}  agree {combined.agree}  "
          f"disagree {combined.disagree}  unknown {combined.unknown}  "
          f"({dt:.1f}s)")
    for c in combined.disagreements():
        print(f"disagree: {c.program!r} at {c.store}: op={c.op} den={c.den}")

    if args.json is not None:
        text = json.dumps(combined.to_dict(), indent=2)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text + "\n")

    if combined.disagree:
        return 4
    if combined.unknown:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
