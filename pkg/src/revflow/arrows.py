"""Arrow expressions evaluated one point at a time.

The denotational layer compiles programs into a small combinator language:
primitives with a forward and a backward rule, composition, dagger, joins,
the disjointness tensor with taggers and symmetry, restriction, and the two
loop operators.  ``apply`` pushes a single value through such an expression
in either direction without materialising any graph, so it works over
unbounded stores.  Loop orbits consume fuel; running out yields a result
distinct from undefinedness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from revflow.kernel import L, R

FORWARD = "forward"
BACKWARD = "backward"


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


#: evaluation produced no value at this input
UNDEFINED = _Sentinel("undefined")
#: orbit budget ran out before a verdict
FUEL_EXHAUSTED = _Sentinel("fuel-exhausted")


def is_value(r) -> bool:
    return r is not UNDEFINED and r is not FUEL_EXHAUSTED


class JoinConflict(RuntimeError):
    """Two join members produced different values at the same input."""


class ArrowExpr:
    """Base class; nodes are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Prim(ArrowExpr):
    """Named primitive with explicit forward and backward rules.

    Rules return the output value or None when undefined.  kind is "endo"
    (store to store) or "decision" (store to tagged store); the finite
    lowering uses it to pick the codomain.
    """

    name: str
    fwd: Callable[[Any], Any] = field(compare=False)
    bwd: Callable[[Any], Any] = field(compare=False)
    kind: str = "endo"


@dataclass(frozen=True)
class Identity(ArrowExpr):
    pass


@dataclass(frozen=True)
class Zero(ArrowExpr):
    pass


@dataclass(frozen=True)
class Compose(ArrowExpr):
    after: ArrowExpr
    before: ArrowExpr


@dataclass(frozen=True)
class Dagger(ArrowExpr):
    inner: ArrowExpr


@dataclass(frozen=True)
class Join(ArrowExpr):
    members: tuple


@dataclass(frozen=True)
class Oplus(ArrowExpr):
    left: ArrowExpr
    right: ArrowExpr


@dataclass(frozen=True)
class Inj1(ArrowExpr):
    pass


@dataclass(frozen=True)
class Inj2(ArrowExpr):
    pass


@dataclass(frozen=True)
class Gamma(ArrowExpr):
    pass


@dataclass(frozen=True)
class Restriction(ArrowExpr):
    inner: ArrowExpr


@dataclass(frozen=True)
class Trace(ArrowExpr):
    """Loop over the right summand: enter tagged L, iterate while R."""

    inner: ArrowExpr


@dataclass(frozen=True)
class MetaLoopJoin(ArrowExpr):
    """Unrolled loop join: enter the internal state directly, exit through L."""

    inner: ArrowExpr


class _Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _flip(d: str) -> str:
    return BACKWARD if d == FORWARD else FORWARD


def apply(expr: ArrowExpr, value, direction: str = FORWARD, fuel: int = 10000,
          check_joins: bool = False):
    """Evaluate expr at a single value.

    Returns the output value, UNDEFINED, or FUEL_EXHAUSTED.  With
    check_joins set, every join member is probed and disagreeing defined
    members raise JoinConflict.
    """
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"bad direction {direction!r}")
    return _apply(expr, value, direction, _Budget(fuel), check_joins)


def _apply(e, v, d, budget, check):
    if isinstance(e, Prim):
        rule = e.fwd if d == FORWARD else e.bwd
        out = rule(v)
        return UNDEFINED if out is None else out
    if isinstance(e, Identity):
        return v
    if isinstance(e, Zero):
        return UNDEFINED
    if isinstance(e, Compose):
        first, second = (e.before, e.after) if d == FORWARD else (e.after, e.before)
        mid = _apply(first, v, d, budget, check)
        if not is_value(mid):
            return mid
        return _apply(second, mid, d, budget, check)
    if isinstance(e, Dagger):
        return _apply(e.inner, v, _flip(d), budget, check)
    if isinstance(e, Join):
        return _apply_join(e, v, d, budget, check)
    if isinstance(e, Oplus):
        if isinstance(v, L):
            out = _apply(e.left, v.value, d, budget, check)
            return L(out) if is_value(out) else out
        if isinstance(v, R):
            out = _apply(e.right, v.value, d, budget, check)
            return R(out) if is_value(out) else out
        raise TypeError(f"tensor applied to untagged value {v!r}")
    if isinstance(e, Inj1):
        if d == FORWARD:
            return L(v)
        return v.value if isinstance(v, L) else UNDEFINED
    if isinstance(e, Inj2):
        if d == FORWARD:
            return R(v)
        return v.value if isinstance(v, R) else UNDEFINED
    if isinstance(e, Gamma):
        if isinstance(v, L):
            return R(v.value)
        if isinstance(v, R):
            return L(v.value)
        raise TypeError(f"symmetry applied to untagged value {v!r}")
    if isinstance(e, Restriction):
        # a restriction idempotent is self-converse: probe forward either way
        out = _apply(e.inner, v, FORWARD, budget, check)
        return v if is_value(out) else out
    if isinstance(e, Trace):
        return _orbit(e.inner, L(v), d, budget, check)
    if isinstance(e, MetaLoopJoin):
        if d == FORWARD:
            return _orbit(e.inner, R(v), d, budget, check)
        # converse of the unrolled join: one step back through the exit leg
        out = _apply(e.inner, L(v), BACKWARD, budget, check)
        if not is_value(out):
            return out
        return out.value if isinstance(out, R) else UNDEFINED
    raise TypeError(f"not an arrow expression: {e!r}")


def _apply_join(e, v, d, budget, check):
    found = None
    fuel_out = False
    for m in e.members:
        out = _apply(m, v, d, budget, check)
        if out is FUEL_EXHAUSTED:
            fuel_out = True
        elif is_value(out):
            if found is None:
                found = out
            elif check and out != found:
                raise JoinConflict(
                    f"join members disagree at {v!r}: {found!r} vs {out!r}")
            if not check:
                return out
    if found is not None:
        return found
    return FUEL_EXHAUSTED if fuel_out else UNDEFINED


def _orbit(inner, start, d, budget, check):
    cur = start
    visited = set()
    while True:
        if not budget.spend():
            return FUEL_EXHAUSTED
        out = _apply(inner, cur, d, budget, check)
        if not is_value(out):
            return out
        if isinstance(out, L):
            return out.value
        if not isinstance(out, R):
            raise TypeError(f"orbit step produced untagged value {out!r}")
        if out.value in visited:
            return UNDEFINED  # exact state revisited: the orbit cycles
        visited.add(out.value)
        cur = out
