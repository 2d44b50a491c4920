#!/usr/bin/env python3
"""Walk one loop program through every layer of the toolkit.

The program moves the value of x2 into x1, one unit per iteration:

    from x1 do x1 += 1; x2 += -1 until x2

Shown below: a traced big-step run, the same answer from the pointwise
arrow engine and from the lowered finite graph, the whole finite
denotation as a set of pairs, and the syntactic inverse running the
result back to the starting store.
"""

import sys

from revflow import denote, rint
from revflow.arrows import BACKWARD, apply, is_value
from revflow.flowchart import eval_cmd
from revflow.inverter import invert_program
from revflow.kernel import format_element
from revflow.rint import parse, print_program

SOURCE = "from x1 do x1 += 1; x2 += -1 until x2"
START = (0, 3)
MODULUS = 5


def main() -> int:
    prog = parse(SOURCE, k=2)
    print(f"program:  {print_program(prog)}")
    print(f"start:    {format_element(START)}")

    trace_log: list[str] = []
    env = rint.RintEnv(prog.k, None)  # unbounded integer store
    out = eval_cmd(START, prog.body, env, fuel=10000, trace=trace_log)
    print(f"\nbig-step run over the integers -> {format_element(out)}")
    for step in trace_log:
        print(f"  {step}")

    fin_env = rint.semantic_env(prog.k, MODULUS)
    expr = denote.denote_cmd(prog.body, fin_env)
    val = apply(expr, START)
    assert is_value(val)
    print(f"\npointwise arrow engine (mod {MODULUS}) -> {format_element(val)}")

    lowered = denote.lower_to_fin(expr, fin_env.store_carrier())
    print(f"lowered finite graph has {len(lowered.graph)} pairs:")
    print(f"  {lowered}")
    print(f"graph lookup of {format_element(START)} -> "
          f"{format_element(lowered.graph[START])}")

    inv = invert_program(prog)
    print(f"\ninverse:  {print_program(inv)}")
    back = eval_cmd(out, inv.body, env, fuel=10000)
    print(f"running the inverse on {format_element(out)} -> {format_element(back)}")

    bval = apply(expr, out, direction=BACKWARD)
    assert is_value(bval)
    print(f"arrow engine backwards on {format_element(out)} -> {format_element(bval)}")

    ok = out == (3, 0) and back == START and bval == START
    print("\nall layers agree" if ok else "\nLAYERS DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
