"""Command line front end.

Exit codes: 0 success or agreement, 1 program undefined at the given store,
2 parse or validation error, 3 fuel exhausted, 4 engines or laws disagree.
"""

from __future__ import annotations

import argparse
import json
import sys

from revflow import conformance, denote, inverter, rint
from revflow.arrows import FUEL_EXHAUSTED, UNDEFINED, apply
from revflow.conformance import FUEL_OUT, UNDEF, VALUE
from revflow.flowchart import FuelExhausted, OpError, eval_cmd
from revflow.kernel import format_element

OK, UNDEFINED_EXIT, PARSE_EXIT, FUEL_EXIT, DISAGREE_EXIT = 0, 1, 2, 3, 4

ENGINES = ("operational", "denotational-point", "operational-finite", "denotational-finite")


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _parse_program(text: str, k: int | None):
    return rint.parse(text, k=k)


def _parse_store(text: str, k: int) -> tuple:
    parts = text.split(",")
    try:
        store = tuple(int(p.strip()) for p in parts)
    except ValueError:
        raise ValueError(f"store must be comma-separated integers, got {text!r}")
    if len(store) != k:
        raise ValueError(f"store has {len(store)} slots, program uses {k} variables")
    return store


def _engine_run(engine: str, prog, store, m, fuel, trace_log=None):
    """(kind, value, error-text) for one engine at one store."""
    if engine in ("operational", "operational-finite"):
        env = rint.RintEnv(prog.k, m)
        try:
            out = eval_cmd(store, prog.body, env, fuel, trace=trace_log)
            return VALUE, out, None
        except FuelExhausted as err:
            return FUEL_OUT, None, str(err)
        except OpError as err:
            return UNDEF, None, str(err)
    senv = rint.semantic_env(prog.k, m)
    expr = denote.denote_cmd(prog.body, senv)
    if engine == "denotational-point":
        out = apply(expr, store, fuel=fuel)
        if out is UNDEFINED:
            return UNDEF, None, None
        if out is FUEL_EXHAUSTED:
            return FUEL_OUT, None, None
        return VALUE, out, None
    if engine == "denotational-finite":
        lowered = denote.lower_to_fin(expr, senv.store_carrier())
        out = lowered(store)
        if out is None:
            return UNDEF, None, None
        return VALUE, out, None
    raise ValueError(f"unknown engine {engine}")


def _outcome_text(kind, value, error):
    if kind == VALUE:
        return format_element(value)
    if kind == UNDEF:
        return f"undefined: {error}" if error else "undefined"
    return "fuel-out"


def _outcome_json(kind, value, error):
    out = {"outcome": kind}
    if kind == VALUE:
        out["store"] = list(value)
    elif error:
        out["error"] = error
    return out


def cmd_run(args) -> int:
    try:
        text = _read_source(args.file)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return PARSE_EXIT
    try:
        prog = _parse_program(text, args.k)
        store_len = len(args.store.split(","))
        if args.k is None and store_len > prog.k:
            prog = rint.RintProgram(k=store_len, body=prog.body)
        store = _parse_store(args.store, prog.k)
    except (rint.ParseError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return PARSE_EXIT

    mode = args.semantics
    finite_m = args.m if args.m is not None else 5
    plain_m = args.m  # None keeps unbounded stores for the Z engines
    trace_log = [] if args.trace else None

    if mode == "all":
        runs = [
            ("operational", plain_m),
            ("denotational-point", plain_m),
            ("operational-finite", finite_m),
            ("denotational-finite", finite_m),
        ]
    elif mode == "operational":
        runs = [("operational", plain_m)]
    elif mode == "denotational-point":
        runs = [("denotational-point", plain_m)]
    else:
        runs = [("denotational-finite", finite_m)]

    results = {}
    for engine, m in runs:
        log = trace_log if engine == "operational" else None
        run_store = store if m is None else tuple(v % m for v in store)
        results[engine] = _engine_run(engine, prog, run_store, m, args.fuel, log)

    # engines sharing a store model must agree
    disagree = False
    for a, b in (("operational", "denotational-point"),
                 ("operational-finite", "denotational-finite")):
        if a in results and b in results:
            ka, va, _ = results[a]
            kb, vb, _ = results[b]
            if FUEL_OUT not in (ka, kb) and (ka, va) != (kb, vb):
                disagree = True

    kinds = [kind for kind, _, _ in results.values()]
    if disagree:
        code = DISAGREE_EXIT
    elif FUEL_OUT in kinds:
        code = FUEL_EXIT
    elif UNDEF in kinds:
        code = UNDEFINED_EXIT
    else:
        code = OK

    if args.json:
        doc = {"engines": {e: _outcome_json(*results[e]) for e in results}}
        if len(results) > 1:
            doc["agree"] = not disagree
        if trace_log is not None:
            doc["trace"] = trace_log
        print(json.dumps(doc, separators=(",", ":")))
        return code

    if trace_log is not None:
        print("[" + ", ".join(trace_log) + "]")
    texts = {e: _outcome_text(*results[e]) for e in results}
    if len(set(texts.values())) == 1:
        print(next(iter(texts.values())))
    else:
        for engine in ENGINES:
            if engine in texts:
                print(f"{engine}: {texts[engine]}")
    return code


def cmd_invert(args) -> int:
    try:
        text = _read_source(args.file)
        prog = _parse_program(text, args.k)
    except (rint.ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return PARSE_EXIT
    print(rint.print_program(inverter.invert_program(prog)))
    return OK


def cmd_check_equiv(args) -> int:
    try:
        p1 = _parse_program(_read_source(args.file1), args.k)
        p2 = _parse_program(_read_source(args.file2), args.k)
        if p1.k != p2.k:
            k = max(p1.k, p2.k)
            p1 = rint.RintProgram(k=k, body=p1.body)
            p2 = rint.RintProgram(k=k, body=p2.body)
    except (rint.ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return PARSE_EXIT
    res = conformance.check_full_abstraction(p1, p2, m=args.m, fuel=args.fuel)
    print(f"observationally-equivalent: {'yes' if res.op_equivalent else 'no'}")
    print(f"denotations-equal: {'yes' if res.den_equal else 'no'}")
    if not res.conclusive:
        print("inconclusive: some runs exhausted their fuel")
        return FUEL_EXIT
    if not res.holds:
        print("MISMATCH: observational equivalence and denotational equality differ")
        return DISAGREE_EXIT
    return OK


def cmd_conformance(args) -> int:
    report = conformance.conformance_sweep(args.size, args.k, args.m, args.fuel)
    if args.json is not None:
        payload = report.to_json()
        if args.json == "-":
            print(payload)
        else:
            with open(args.json, "w") as fh:
                fh.write(payload)
    if args.json != "-":
        print(f"cases: {len(report.cases)} agree: {report.agree} "
              f"disagree: {report.disagree} unknown: {report.unknown}")
        for c in report.disagreements():
            store_csv = ",".join(str(v) for v in c.store)
            print(f"disagree: {c.program!r} at {format_element(c.store)}: "
                  f"op={c.op} den={c.den} | reproduce: echo '{c.program}' | "
                  f"revflow run - --store {store_csv} --k {args.k} --m {args.m} "
                  f"--semantics all")
    return DISAGREE_EXIT if report.disagree else OK


def cmd_verify_axioms(args) -> int:
    report = conformance.axiom_suite(args.seed, args.cases, args.carrier_max)
    print(f"cases: {report.cases} checks: {report.checks_run} "
          f"violations: {len(report.violations)}")
    for v in report.violations:
        print(f"violation: {v}")
    return OK if report.ok else DISAGREE_EXIT


def cmd_enumerate(args) -> int:
    for prog in conformance.enumerate_programs(args.size, args.k):
        print(rint.print_program(prog))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revflow",
        description="Reversible flowchart programs: run, invert, and check them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a program at a store")
    run.add_argument("file", help="program file, or - for stdin")
    run.add_argument("--store", required=True, help="comma-separated integers")
    run.add_argument("--k", type=int, default=None, help="variable count")
    run.add_argument("--m", type=int, default=None,
                     help="modulus; unbounded integers when omitted")
    run.add_argument("--fuel", type=int, default=10000)
    run.add_argument("--semantics", default="operational",
                     choices=["operational", "denotational-point",
                              "denotational-finite", "all"])
    run.add_argument("--trace", action="store_true",
                     help="print the applied big-step rules")
    run.add_argument("--json", action="store_true")
    run.set_defaults(fn=cmd_run)

    inv = sub.add_parser("invert", help="print the syntactic inverse")
    inv.add_argument("file")
    inv.add_argument("--k", type=int, default=None)
    inv.set_defaults(fn=cmd_invert)

    ce = sub.add_parser("check-equiv",
                        help="observational equivalence vs denotational equality")
    ce.add_argument("file1")
    ce.add_argument("file2")
    ce.add_argument("--k", type=int, default=None)
    ce.add_argument("--m", type=int, default=5)
    ce.add_argument("--fuel", type=int, default=10000)
    ce.set_defaults(fn=cmd_check_equiv)

    conf = sub.add_parser("conformance", help="sweep all programs up to a size")
    conf.add_argument("--size", type=int, required=True)
    conf.add_argument("--k", type=int, default=2)
    conf.add_argument("--m", type=int, default=5)
    conf.add_argument("--fuel", type=int, default=10000)
    conf.add_argument("--json", default=None, metavar="OUT",
                      help="write the JSON report here (- for stdout)")
    conf.set_defaults(fn=cmd_conformance)

    ax = sub.add_parser("verify-axioms", help="randomised law checks on the kernel")
    ax.add_argument("--seed", type=int, default=0)
    ax.add_argument("--cases", type=int, default=1000)
    ax.add_argument("--carrier-max", type=int, default=8)
    ax.set_defaults(fn=cmd_verify_axioms)

    en = sub.add_parser("enumerate", help="list all programs up to a size")
    en.add_argument("--size", type=int, required=True)
    en.add_argument("--k", type=int, default=2)
    en.set_defaults(fn=cmd_enumerate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
