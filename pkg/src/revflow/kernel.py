"""Partial injections between finite carriers.

A morphism here is a finite partial injective map: a graph (dict) between two
carriers, total on neither side.  These compose like partial functions, carry a
dagger (relational converse), restriction idempotents, compatible joins, a
disjointness tensor with taggers and a symmetry, decisions, and a trace
operator computed by orbit iteration.  Everything is extensional: two
morphisms are equal iff their carriers and graphs are.

Elements of a carrier are ints, tuples of ints (stores), or L/R-tagged
elements (disjoint sums).  Carriers keep their elements in a canonical order
so printed morphisms and enumerations are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Iterable


@dataclass(frozen=True)
class L:
    """Left tag of a disjoint sum."""

    value: Any


@dataclass(frozen=True)
class R:
    """Right tag of a disjoint sum."""

    value: Any


def sort_key(e):
    """Canonical ordering key; total on any mix of ints, tuples, L/R tags."""
    if isinstance(e, L):
        return (2, sort_key(e.value))
    if isinstance(e, R):
        return (3, sort_key(e.value))
    if isinstance(e, tuple):
        return (1, tuple(sort_key(x) for x in e))
    return (0, e)


def format_element(e) -> str:
    if isinstance(e, L):
        return f"L({format_element(e.value)})"
    if isinstance(e, R):
        return f"R({format_element(e.value)})"
    if isinstance(e, tuple):
        return "(" + ",".join(format_element(x) for x in e) + ")"
    return str(e)


class CarrierMismatch(ValueError):
    """Operation applied to morphisms whose carriers do not line up."""


class NotInjective(ValueError):
    """A graph mapped two elements to the same target."""


class IncompatibleJoin(ValueError):
    """Join of morphisms that disagree on an input or collide on an output."""


class Carrier:
    """Finite set of elements in canonical order."""

    __slots__ = ("elements", "_members")

    def __init__(self, elements: Iterable):
        elems = sorted(set(elements), key=sort_key)
        object.__setattr__(self, "elements", tuple(elems))
        object.__setattr__(self, "_members", frozenset(elems))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Carrier is immutable")

    def __contains__(self, e):
        return e in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return "Carrier({" + ", ".join(format_element(e) for e in self.elements) + "})"


class PartialInjection:
    """Partial injective map between two carriers.

    The graph is validated on construction: keys inside dom, values inside
    cod, no two keys sharing a value.  Instances are value-objects; the graph
    is exposed read-only.
    """

    __slots__ = ("dom", "cod", "graph")

    def __init__(self, dom: Carrier, cod: Carrier, graph: dict):
        for x, y in graph.items():
            if x not in dom:
                raise ValueError(f"graph key {format_element(x)} not in dom")
            if y not in cod:
                raise ValueError(f"graph value {format_element(y)} not in cod")
        if len(set(graph.values())) != len(graph):
            seen = {}
            for x, y in graph.items():
                if y in seen:
                    raise NotInjective(
                        f"{format_element(seen[y])} and {format_element(x)} "
                        f"both map to {format_element(y)}"
                    )
                seen[y] = x
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "graph", MappingProxyType(dict(graph)))

    def __setattr__(self, name, value):
        raise AttributeError("PartialInjection is immutable")

    def __call__(self, x):
        """Value at x, or None when undefined there."""
        return self.graph.get(x)

    def __eq__(self, other):
        return (
            isinstance(other, PartialInjection)
            and self.dom == other.dom
            and self.cod == other.cod
            and dict(self.graph) == dict(other.graph)
        )

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset(self.graph.items())))

    def __str__(self):
        return format_morphism(self)

    def __repr__(self):
        return format_morphism(self)


def format_morphism(f: PartialInjection) -> str:
    """Debug format: ``{x1 -> y1, x2 -> y2}`` with keys in carrier order."""
    pairs = sorted(f.graph.items(), key=lambda kv: sort_key(kv[0]))
    return "{" + ", ".join(f"{format_element(x)} -> {format_element(y)}" for x, y in pairs) + "}"


# ---------------------------------------------------------------------------
# category structure


def identity(a: Carrier) -> PartialInjection:
    """Total identity on a carrier."""
    return PartialInjection(a, a, {x: x for x in a})


def zero(a: Carrier, b: Carrier) -> PartialInjection:
    """Nowhere-defined morphism a -> b."""
    return PartialInjection(a, b, {})


def compose(g: PartialInjection, f: PartialInjection) -> PartialInjection:
    """g after f; defined where both legs are."""
    if f.cod != g.dom:
        raise CarrierMismatch("compose: cod of inner != dom of outer")
    graph = {}
    for x, y in f.graph.items():
        z = g.graph.get(y)
        if z is not None:
            graph[x] = z
    return PartialInjection(f.dom, g.cod, graph)


def dagger(f: PartialInjection) -> PartialInjection:
    """Relational converse; injectivity makes it a partial injection again."""
    return PartialInjection(f.cod, f.dom, {y: x for x, y in f.graph.items()})


def restriction(f: PartialInjection) -> PartialInjection:
    """Partial identity on dom(f) defined exactly where f is."""
    return PartialInjection(f.dom, f.dom, {x: x for x in f.graph})


def _require_parallel(f: PartialInjection, g: PartialInjection, op: str):
    if f.dom != g.dom or f.cod != g.cod:
        raise CarrierMismatch(f"{op}: morphisms are not parallel")


def equals(f: PartialInjection, g: PartialInjection) -> bool:
    """Extensional equality of parallel morphisms."""
    _require_parallel(f, g, "equals")
    return dict(f.graph) == dict(g.graph)


def leq(f: PartialInjection, g: PartialInjection) -> bool:
    """f restricts g: g agrees with f wherever f is defined."""
    _require_parallel(f, g, "leq")
    return all(g.graph.get(x) == y for x, y in f.graph.items())


def compatible(f: PartialInjection, g: PartialInjection) -> bool:
    """Agreement on shared inputs and on shared outputs; joinable iff this."""
    _require_parallel(f, g, "compatible")
    for x, y in f.graph.items():
        if x in g.graph and g.graph[x] != y:
            return False
    finv = {y: x for x, y in f.graph.items()}
    for x, y in g.graph.items():
        if y in finv and finv[y] != x:
            return False
    return True


def disjoint(f: PartialInjection, g: PartialInjection) -> bool:
    """No shared defined inputs and no shared outputs."""
    _require_parallel(f, g, "disjoint")
    if any(x in g.graph for x in f.graph):
        return False
    values_g = set(g.graph.values())
    return not any(y in values_g for y in f.graph.values())


def join(fs, dom: Carrier | None = None, cod: Carrier | None = None) -> PartialInjection:
    """Union of pairwise compatible morphisms; IncompatibleJoin otherwise.

    dom/cod are only needed for an empty family.
    """
    fs = list(fs)
    if not fs:
        if dom is None or cod is None:
            raise ValueError("empty join needs explicit carriers")
        return zero(dom, cod)
    first = fs[0]
    for f in fs[1:]:
        _require_parallel(first, f, "join")
    graph: dict = {}
    values: dict = {}
    for f in fs:
        for x, y in f.graph.items():
            if x in graph:
                if graph[x] != y:
                    raise IncompatibleJoin(
                        f"members disagree at {format_element(x)}: "
                        f"{format_element(graph[x])} vs {format_element(y)}"
                    )
                continue
            if y in values and values[y] != x:
                raise IncompatibleJoin(
                    f"members collide at output {format_element(y)}"
                )
            graph[x] = y
            values[y] = x
    return PartialInjection(first.dom, first.cod, graph)


# ---------------------------------------------------------------------------
# disjointness tensor


def oplus_carrier(a: Carrier, b: Carrier) -> Carrier:
    """Disjoint sum of carriers via L/R tagging."""
    return Carrier([L(x) for x in a] + [R(y) for y in b])


def split_sum(c: Carrier) -> tuple[Carrier, Carrier]:
    """Recover the two halves of a tagged carrier."""
    left, right = [], []
    for e in c:
        if isinstance(e, L):
            left.append(e.value)
        elif isinstance(e, R):
            right.append(e.value)
        else:
            raise ValueError(f"element {format_element(e)} is not tagged")
    return Carrier(left), Carrier(right)


def oplus(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Tensor on morphisms: acts as f on the left half, g on the right."""
    dom = oplus_carrier(f.dom, g.dom)
    cod = oplus_carrier(f.cod, g.cod)
    graph: dict = {}
    for x, y in f.graph.items():
        graph[L(x)] = L(y)
    for x, y in g.graph.items():
        graph[R(x)] = R(y)
    return PartialInjection(dom, cod, graph)


def inj1(a: Carrier, b: Carrier) -> PartialInjection:
    """Quasi-injection a -> a + b; total, tags left."""
    return PartialInjection(a, oplus_carrier(a, b), {x: L(x) for x in a})


def inj2(a: Carrier, b: Carrier) -> PartialInjection:
    """Quasi-injection b -> a + b; total, tags right."""
    return PartialInjection(b, oplus_carrier(a, b), {y: R(y) for y in b})


def gamma(a: Carrier, b: Carrier) -> PartialInjection:
    """Symmetry a + b -> b + a; swaps tags."""
    dom = oplus_carrier(a, b)
    cod = oplus_carrier(b, a)
    graph: dict = {}
    for x in a:
        graph[L(x)] = R(x)
    for y in b:
        graph[R(y)] = L(y)
    return PartialInjection(dom, cod, graph)


def decision_of(f: PartialInjection) -> PartialInjection:
    """Branch predicate of f : a -> b + c, as a map a -> a + a.

    Sends x to L(x) when f lands left, to R(x) when f lands right, and is
    undefined where f is.
    """
    split_sum(f.cod)  # cod must be a sum
    graph: dict = {}
    for x, y in f.graph.items():
        graph[x] = L(x) if isinstance(y, L) else R(x)
    return PartialInjection(f.dom, oplus_carrier(f.dom, f.dom), graph)


# ---------------------------------------------------------------------------
# trace


def trace(f: PartialInjection) -> PartialInjection:
    """Trace of f : a + u -> b + u over u, by orbit iteration.

    Enter at L(x), follow f; exit on an L-tagged output; a revisited internal
    state means the orbit cycles and the result is undefined at x.
    """
    a, u1 = split_sum(f.dom)
    b, u2 = split_sum(f.cod)
    if u1 != u2:
        raise CarrierMismatch("trace: internal carriers differ")
    graph: dict = {}
    for x in a:
        cur = L(x)
        visited = set()
        while True:
            y = f.graph.get(cur)
            if y is None:
                break
            if isinstance(y, L):
                graph[x] = y.value
                break
            if y.value in visited:
                break
            visited.add(y.value)
            cur = y
    return PartialInjection(a, b, graph)


def meta_loop(f: PartialInjection) -> PartialInjection:
    """Orbit of f : a + u -> b + u entered at an internal state.

    Follows f from R(x) until an L-tagged exit.  The result need not be
    injective on all of u; a collision raises IncompatibleJoin.
    """
    a, u1 = split_sum(f.dom)
    b, u2 = split_sum(f.cod)
    if u1 != u2:
        raise CarrierMismatch("meta_loop: internal carriers differ")
    graph: dict = {}
    values: dict = {}
    for x in u1:
        cur = R(x)
        visited = set()
        while True:
            y = f.graph.get(cur)
            if y is None:
                break
            if isinstance(y, L):
                if y.value in values and values[y.value] != x:
                    raise IncompatibleJoin(
                        f"orbit outputs collide at {format_element(y.value)}"
                    )
                graph[x] = y.value
                values[y.value] = x
                break
            if y.value in visited:
                break
            visited.add(y.value)
            cur = y
    return PartialInjection(u1, b, graph)


def trace_components(f: PartialInjection):
    """The four corner maps (f11, f12, f21, f22) of f : a + u -> b + u."""
    a, u = split_sum(f.dom)
    b, _ = split_sum(f.cod)
    i1a, i2a = inj1(a, u), inj2(a, u)
    i1b, i2b = inj1(b, u), inj2(b, u)
    f11 = compose(dagger(i1b), compose(f, i1a))
    f12 = compose(dagger(i2b), compose(f, i1a))
    f21 = compose(dagger(i1b), compose(f, i2a))
    f22 = compose(dagger(i2b), compose(f, i2a))
    return f11, f12, f21, f22


def trace_by_join(f: PartialInjection) -> PartialInjection:
    """Trace as the join of f11 with f21.f22^n.f12 for n up to |u|.

    Exists because the summands are pairwise disjoint; used as the oracle the
    orbit algorithm is checked against.
    """
    _, u = split_sum(f.dom)
    f11, f12, f21, f22 = trace_components(f)
    terms = [f11]
    walk = f12
    for _ in range(len(u) + 1):
        terms.append(compose(f21, walk))
        walk = compose(f22, walk)
    return join(terms)
