"""Structured reversible flowcharts: syntax trees and big-step evaluation.

Commands are built from atomic steps, sequencing, a two-way conditional
guarded by an entry and an exit predicate, and an entry-asserting loop.  The
loop's internal unrolled form (Loop) can be evaluated but is not accepted
from source programs.  Atomic steps and elementary predicates are opaque
ids resolved through an environment object providing ``step_atomic(op, store)``
and ``eval_elem(pid, store)``.

Evaluation either returns the final store or raises an OpError naming which
assertion failed, at which store, and (when the syntax tree carries
positions) where in the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class Pred:
    __slots__ = ()


@dataclass(frozen=True)
class TT(Pred):
    pass


@dataclass(frozen=True)
class FF(Pred):
    pass


@dataclass(frozen=True)
class Elem(Pred):
    pid: Any


@dataclass(frozen=True)
class Not(Pred):
    arg: Pred


@dataclass(frozen=True)
class And(Pred):
    lhs: Pred
    rhs: Pred


@dataclass(frozen=True)
class Or(Pred):
    lhs: Pred
    rhs: Pred


class Cmd:
    __slots__ = ()


@dataclass(frozen=True)
class Skip(Cmd):
    pos: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atomic(Cmd):
    op: Any
    pos: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Seq(Cmd):
    fst: Cmd
    snd: Cmd
    pos: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class If(Cmd):
    p: Pred
    c1: Cmd
    c2: Cmd
    q: Pred
    pos: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class From(Cmd):
    p: Pred
    body: Cmd
    q: Pred
    pos: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Loop(Cmd):
    """Internal re-entry form of From; not source syntax."""

    p: Pred
    body: Cmd
    q: Pred
    pos: Any = field(default=None, compare=False, repr=False)


class OpError(Exception):
    """Evaluation got stuck; carries the offending store and source position."""

    phrase = "evaluation stuck"

    def __init__(self, store, pos=None, detail=""):
        self.store = store
        self.pos = pos
        where = f" at line {pos[0]}, col {pos[1]}" if pos else ""
        what = f" [{detail}]" if detail else ""
        super().__init__(f"{self.phrase}{where}: store {store}{what}")


class EntryAssertionViolation(OpError):
    """Loop entered with its entry assertion false."""

    phrase = "entry assertion violated"


class ExitAssertionViolation(OpError):
    """Conditional exit predicate disagreed with the branch taken."""

    phrase = "exit assertion violated"


class LoopAssertionViolation(OpError):
    """Loop re-entered a state where the entry assertion holds."""

    phrase = "loop re-entry assertion violated"


class AtomicUndefined(OpError):
    """Atomic step had no value at this store."""

    phrase = "atomic step undefined"


class Divergence(OpError):
    """Loop revisited a state: no finite derivation exists."""

    phrase = "loop revisited a state, no finite derivation"


class FuelExhausted(OpError):
    """Iteration budget ran out before a verdict."""

    phrase = "fuel exhausted"


def eval_pred(store, p: Pred, env) -> bool:
    """Predicates are total: always a boolean."""
    if isinstance(p, TT):
        return True
    if isinstance(p, FF):
        return False
    if isinstance(p, Elem):
        return env.eval_elem(p.pid, store)
    if isinstance(p, Not):
        return not eval_pred(store, p.arg, env)
    if isinstance(p, And):
        return eval_pred(store, p.lhs, env) and eval_pred(store, p.rhs, env)
    if isinstance(p, Or):
        return eval_pred(store, p.lhs, env) or eval_pred(store, p.rhs, env)
    raise TypeError(f"not a predicate: {p!r}")


def desugar_or(p: Pred) -> Pred:
    """Rewrite disjunctions to negated conjunctions, recursively."""
    if isinstance(p, Or):
        return Not(And(Not(desugar_or(p.lhs)), Not(desugar_or(p.rhs))))
    if isinstance(p, Not):
        return Not(desugar_or(p.arg))
    if isinstance(p, And):
        return And(desugar_or(p.lhs), desugar_or(p.rhs))
    return p


def desugar_cmd(p: Cmd) -> Cmd:
    """desugar_or applied to every predicate inside a command."""
    if isinstance(p, (Skip, Atomic)):
        return p
    if isinstance(p, Seq):
        return Seq(desugar_cmd(p.fst), desugar_cmd(p.snd), pos=p.pos)
    if isinstance(p, If):
        return If(desugar_or(p.p), desugar_cmd(p.c1), desugar_cmd(p.c2),
                  desugar_or(p.q), pos=p.pos)
    if isinstance(p, From):
        return From(desugar_or(p.p), desugar_cmd(p.body), desugar_or(p.q), pos=p.pos)
    if isinstance(p, Loop):
        return Loop(desugar_or(p.p), desugar_cmd(p.body), desugar_or(p.q), pos=p.pos)
    raise TypeError(f"not a command: {p!r}")


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, fuel):
        self.left = fuel

    def spend(self):
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def eval_cmd(store, c: Cmd, env, fuel: int = 10000, trace: list | None = None):
    """Big-step evaluation; final store, or an OpError when stuck.

    fuel bounds the total number of loop iterations across the whole run.
    trace, when a list, receives one entry per applied rule.
    """
    return _eval(store, c, env, _Fuel(fuel), trace)


def _log(trace, entry):
    if trace is not None:
        trace.append(entry)


def _eval(store, c, env, fuel, trace):
    if isinstance(c, Skip):
        _log(trace, "Skip")
        return store
    if isinstance(c, Atomic):
        out = env.step_atomic(c.op, store)
        if out is None:
            raise AtomicUndefined(store, c.pos, detail=str(c.op))
        _log(trace, f"Atomic {c.op}")
        return out
    if isinstance(c, Seq):
        _log(trace, "Seq")
        mid = _eval(store, c.fst, env, fuel, trace)
        return _eval(mid, c.snd, env, fuel, trace)
    if isinstance(c, If):
        taken = eval_pred(store, c.p, env)
        _log(trace, "If-true" if taken else "If-false")
        out = _eval(store, c.c1 if taken else c.c2, env, fuel, trace)
        if eval_pred(out, c.q, env) != taken:
            raise ExitAssertionViolation(out, c.pos)
        return out
    if isinstance(c, From):
        if not eval_pred(store, c.p, env):
            raise EntryAssertionViolation(store, c.pos)
        if eval_pred(store, c.q, env):
            _log(trace, "From-exit")
            return store
        _log(trace, "From-enter")
        if not fuel.spend():
            raise FuelExhausted(store, c.pos)
        cur = _eval(store, c.body, env, fuel, trace)
        return _loop(cur, c, env, fuel, trace)
    if isinstance(c, Loop):
        return _loop(store, c, env, fuel, trace)
    raise TypeError(f"not a command: {c!r}")


def _loop(store, c, env, fuel, trace):
    # re-entry states of a From, or a bare Loop node
    cur = store
    visited = set()
    while True:
        if eval_pred(cur, c.p, env):
            raise LoopAssertionViolation(cur, c.pos)
        if eval_pred(cur, c.q, env):
            _log(trace, "Loop-exit")
            return cur
        if cur in visited:
            raise Divergence(cur, c.pos)
        visited.add(cur)
        if not fuel.spend():
            raise FuelExhausted(cur, c.pos)
        _log(trace, "Loop-iter")
        cur = _eval(cur, c.body, env, fuel, trace)
