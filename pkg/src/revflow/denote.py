"""Compositional interpretation of flowcharts as arrow expressions.

Predicates become decisions: maps from the store into a two-fold tagged sum
whose left component collects the witnesses and whose right component the
counterexamples.  Commands become store-to-store arrows; the conditional
routes through the branch sum and re-merges through the converse of the exit
decision, and the loop is the trace of a step arrow over the store.

The same expression can be run pointwise (arrows.apply) over unbounded
stores, or lowered to an extensional partial injection over a finite store
carrier (lower_to_fin); the two must agree wherever both are defined.
"""

from __future__ import annotations

from revflow import arrows, flowchart, kernel
from revflow.arrows import (
    ArrowExpr, Compose, Dagger, Gamma, Identity, Inj1, Inj2, Join,
    MetaLoopJoin, Oplus, Prim, Restriction, Trace, Zero,
)


class SemanticEnv:
    """Store description plus primitive arrows for ops and predicates.

    make_atomic(op) and make_pred(pid) build Prim nodes on demand; results
    are memoised so structurally equal programs share subexpressions.
    carrier is the finite store space, or None when stores are unbounded.
    """

    def __init__(self, k, m, make_atomic, make_pred, carrier=None):
        self.k = k
        self.m = m
        self._make_atomic = make_atomic
        self._make_pred = make_pred
        self._carrier = carrier
        self._atomics = {}
        self._preds = {}

    def atomic_arrow(self, op) -> Prim:
        if op not in self._atomics:
            self._atomics[op] = self._make_atomic(op)
        return self._atomics[op]

    def pred_decision(self, pid) -> Prim:
        if pid not in self._preds:
            self._preds[pid] = self._make_pred(pid)
        return self._preds[pid]

    def store_carrier(self) -> kernel.Carrier:
        if self._carrier is None:
            raise ValueError("environment has no finite store carrier")
        return self._carrier


FORMULA = "formula"
SUGAR = "sugar"


def _witness(d: ArrowExpr) -> ArrowExpr:
    # partial identity on stores the decision sends left
    return Restriction(Compose(Dagger(Inj1()), d))


def _counter(d: ArrowExpr) -> ArrowExpr:
    # partial identity on stores the decision sends right
    return Restriction(Compose(Dagger(Inj2()), d))


def _guard(dp: ArrowExpr, dq: ArrowExpr) -> ArrowExpr:
    # definedness of both operand decisions
    return Compose(Restriction(dp), Restriction(dq))


def denote_pred(p: flowchart.Pred, env: SemanticEnv, or_mode: str = FORMULA) -> ArrowExpr:
    """Decision arrow of a predicate: store -> store + store."""
    if isinstance(p, flowchart.TT):
        return Inj1()
    if isinstance(p, flowchart.FF):
        return Inj2()
    if isinstance(p, flowchart.Elem):
        return env.pred_decision(p.pid)
    if isinstance(p, flowchart.Not):
        return Compose(Gamma(), denote_pred(p.arg, env, or_mode))
    if isinstance(p, flowchart.And):
        dp = denote_pred(p.lhs, env, or_mode)
        dq = denote_pred(p.rhs, env, or_mode)
        both = Compose(Inj1(), Compose(_witness(dp), _witness(dq)))
        either_not = Compose(Inj2(), Join((_counter(dp), _counter(dq))))
        return Compose(Join((both, either_not)), _guard(dp, dq))
    if isinstance(p, flowchart.Or):
        if or_mode == SUGAR:
            lowered = flowchart.Not(flowchart.And(flowchart.Not(p.lhs), flowchart.Not(p.rhs)))
            return denote_pred(lowered, env, or_mode)
        dp = denote_pred(p.lhs, env, or_mode)
        dq = denote_pred(p.rhs, env, or_mode)
        either = Compose(Inj1(), Join((_witness(dp), _witness(dq))))
        both_not = Compose(Inj2(), Compose(_counter(dp), _counter(dq)))
        return Compose(Join((either, both_not)), _guard(dp, dq))
    raise TypeError(f"not a predicate: {p!r}")


def _beta(p, body, q, env, or_mode) -> ArrowExpr:
    # one loop step on store + store: left just entered, right keeps looping
    step = Oplus(Identity(), denote_cmd(body, env, or_mode))
    return Compose(step, Compose(denote_pred(q, env, or_mode),
                                 Dagger(denote_pred(p, env, or_mode))))


def denote_cmd(c: flowchart.Cmd, env: SemanticEnv, or_mode: str = FORMULA) -> ArrowExpr:
    """Store-to-store arrow of a command."""
    if isinstance(c, flowchart.Skip):
        return Identity()
    if isinstance(c, flowchart.Atomic):
        return env.atomic_arrow(c.op)
    if isinstance(c, flowchart.Seq):
        return Compose(denote_cmd(c.snd, env, or_mode), denote_cmd(c.fst, env, or_mode))
    if isinstance(c, flowchart.If):
        branches = Oplus(denote_cmd(c.c1, env, or_mode), denote_cmd(c.c2, env, or_mode))
        return Compose(Dagger(denote_pred(c.q, env, or_mode)),
                       Compose(branches, denote_pred(c.p, env, or_mode)))
    if isinstance(c, flowchart.From):
        return Trace(_beta(c.p, c.body, c.q, env, or_mode))
    if isinstance(c, flowchart.Loop):
        return MetaLoopJoin(_beta(c.p, c.body, c.q, env, or_mode))
    raise TypeError(f"not a command: {c!r}")


# ---------------------------------------------------------------------------
# lowering to the finite kernel

_BASE = "b"


def _sum(l, r):
    return ("s", l, r)


def _is_sum(s):
    return isinstance(s, tuple) and s[0] == "s"


def _cod_shape(e: ArrowExpr, dom):
    if isinstance(e, Prim):
        return _sum(dom, dom) if e.kind == "decision" else dom
    if isinstance(e, (Identity, Zero, Restriction)):
        return dom
    if isinstance(e, (Inj1, Inj2)):
        return _sum(dom, dom)
    if isinstance(e, Gamma):
        return _sum(dom[2], dom[1])
    if isinstance(e, Oplus):
        return _sum(_cod_shape(e.left, dom[1]), _cod_shape(e.right, dom[2]))
    if isinstance(e, Compose):
        return _cod_shape(e.after, _cod_shape(e.before, dom))
    if isinstance(e, Dagger):
        return _dom_shape(e.inner, dom)
    if isinstance(e, Join):
        return _cod_shape(e.members[0], dom)
    if isinstance(e, Trace):
        inner_cod = _cod_shape(e.inner, _sum(dom, dom))
        return inner_cod[1]
    if isinstance(e, MetaLoopJoin):
        return dom
    raise TypeError(f"not an arrow expression: {e!r}")


def _dom_shape(e: ArrowExpr, cod):
    if isinstance(e, Prim):
        return cod[1] if e.kind == "decision" else cod
    if isinstance(e, (Identity, Zero, Restriction)):
        return cod
    if isinstance(e, (Inj1, Inj2)):
        return cod[1]
    if isinstance(e, Gamma):
        return _sum(cod[2], cod[1])
    if isinstance(e, Oplus):
        return _sum(_dom_shape(e.left, cod[1]), _dom_shape(e.right, cod[2]))
    if isinstance(e, Compose):
        return _dom_shape(e.before, _dom_shape(e.after, cod))
    if isinstance(e, Dagger):
        return _cod_shape(e.inner, cod)
    if isinstance(e, Join):
        return _dom_shape(e.members[0], cod)
    if isinstance(e, (Trace, MetaLoopJoin)):
        return cod
    raise TypeError(f"not an arrow expression: {e!r}")


class _Lowering:
    def __init__(self, sigma: kernel.Carrier):
        self.sigma = sigma
        self._carriers = {_BASE: sigma}

    def carrier(self, shape) -> kernel.Carrier:
        if shape not in self._carriers:
            self._carriers[shape] = kernel.oplus_carrier(
                self.carrier(shape[1]), self.carrier(shape[2]))
        return self._carriers[shape]

    def lower(self, e: ArrowExpr, dom) -> kernel.PartialInjection:
        c = self.carrier(dom)
        if isinstance(e, Prim):
            if dom != _BASE:
                raise ValueError("primitive arrows act on bare stores")
            graph = {}
            for s in c:
                out = e.fwd(s)
                if out is not None:
                    graph[s] = out
            cod = self.carrier(_sum(dom, dom)) if e.kind == "decision" else c
            return kernel.PartialInjection(c, cod, graph)
        if isinstance(e, Identity):
            return kernel.identity(c)
        if isinstance(e, Zero):
            return kernel.zero(c, c)
        if isinstance(e, Compose):
            inner = self.lower(e.before, dom)
            outer = self.lower(e.after, _cod_shape(e.before, dom))
            return kernel.compose(outer, inner)
        if isinstance(e, Dagger):
            return kernel.dagger(self.lower(e.inner, _dom_shape(e.inner, dom)))
        if isinstance(e, Join):
            return kernel.join([self.lower(m, dom) for m in e.members])
        if isinstance(e, Oplus):
            return kernel.oplus(self.lower(e.left, dom[1]), self.lower(e.right, dom[2]))
        if isinstance(e, Inj1):
            return kernel.inj1(c, c)
        if isinstance(e, Inj2):
            return kernel.inj2(c, c)
        if isinstance(e, Gamma):
            return kernel.gamma(self.carrier(dom[1]), self.carrier(dom[2]))
        if isinstance(e, Restriction):
            return kernel.restriction(self.lower(e.inner, dom))
        if isinstance(e, Trace):
            return kernel.trace(self.lower(e.inner, _sum(dom, dom)))
        if isinstance(e, MetaLoopJoin):
            return kernel.meta_loop(self.lower(e.inner, _sum(dom, dom)))
        raise TypeError(f"not an arrow expression: {e!r}")


#: domain shape of command and predicate denotations: one bare store
STORE_SHAPE = _BASE
#: domain shape of a loop body expression: store tagged left or right
TAGGED_SHAPE = _sum(_BASE, _BASE)


def lower_to_fin(e: ArrowExpr, sigma: kernel.Carrier,
                 dom=STORE_SHAPE) -> kernel.PartialInjection:
    """Extensional morphism of an arrow expression over a finite store carrier.

    Computed bottom-up with the finite kernel's operations; loops run the
    exact orbit algorithm, so no fuel is involved and undefinedness is
    definite.  dom names the domain shape of e: STORE_SHAPE fits every
    command or predicate denotation, TAGGED_SHAPE a bare loop body.
    """
    return _Lowering(sigma).lower(e, dom)
