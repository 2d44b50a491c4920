"""Syntactic program inversion.

Runs a flowchart backwards by structural recursion: sequences flip order,
a conditional swaps its entry and exit predicates, a loop swaps its entry
assertion with its exit test, and atomic steps are replaced by their
inverses.  No normalisation or simplification happens, so inverting twice
restores the original tree.
"""

from __future__ import annotations

from revflow import rint
from revflow.flowchart import Atomic, Cmd, From, If, Loop, Seq, Skip


def invert(c: Cmd, atomic=rint.invert_elem) -> Cmd:
    """Inverse command; atomic maps each atomic op to its inverse."""
    if isinstance(c, Skip):
        return Skip()
    if isinstance(c, Atomic):
        return Atomic(atomic(c.op))
    if isinstance(c, Seq):
        return Seq(invert(c.snd, atomic), invert(c.fst, atomic))
    if isinstance(c, If):
        return If(c.q, invert(c.c1, atomic), invert(c.c2, atomic), c.p)
    if isinstance(c, From):
        return From(c.q, invert(c.body, atomic), c.p)
    if isinstance(c, Loop):
        raise ValueError("loop re-entry form has no syntactic inverse")
    raise TypeError(f"not a command: {c!r}")


def invert_program(prog: rint.RintProgram) -> rint.RintProgram:
    return rint.RintProgram(k=prog.k, body=invert(prog.body))
