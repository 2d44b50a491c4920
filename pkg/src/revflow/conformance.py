"""Conformance harness: the executable semantics against the extensional one.

Checks, over finite store spaces, that big-step evaluation and the lowered
partial-injection denotation converge on the same stores to the same values
(soundness and adequacy), that observational equivalence coincides with
equality of denotations (full abstraction), that syntactic inversion lands
on the converse morphism, and that the finite kernel satisfies its algebraic
laws on randomly sampled morphisms.

All sampling is seeded; reports are deterministic given their inputs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from revflow import denote, flowchart, inverter, kernel, rint
from revflow.arrows import FUEL_EXHAUSTED, UNDEFINED, apply, is_value
from revflow.flowchart import Atomic, Elem, FF, From, If, Not, Seq, Skip, TT
from revflow.kernel import (
    Carrier, IncompatibleJoin, PartialInjection, compatible, compose, dagger,
    decision_of, disjoint, equals, gamma, identity, inj1, inj2, join, leq,
    oplus, oplus_carrier, restriction, trace, trace_by_join, zero,
)
from revflow.rint import AddConst, AddVar, RintEnv, RintProgram, SubVar, VarZero

VALUE = "value"
UNDEF = "undefined"
FUEL_OUT = "fuel-out"


def operational_outcome(prog: RintProgram, store, m, fuel):
    """(kind, store-or-None) of a big-step run."""
    env = RintEnv(prog.k, m)
    try:
        return VALUE, flowchart.eval_cmd(store, prog.body, env, fuel)
    except flowchart.FuelExhausted:
        return FUEL_OUT, None
    except flowchart.OpError:
        return UNDEF, None


def point_outcome(expr, store, fuel, check_joins=False):
    """(kind, store-or-None) of a pointwise denotational run."""
    out = apply(expr, store, fuel=fuel, check_joins=check_joins)
    if out is UNDEFINED:
        return UNDEF, None
    if out is FUEL_EXHAUSTED:
        return FUEL_OUT, None
    return VALUE, out


def fin_outcome(lowered: PartialInjection, store):
    """(kind, store-or-None) looked up in an extensional morphism."""
    out = lowered(store)
    return (UNDEF, None) if out is None else (VALUE, out)


def _show(kind, value):
    return rint_store_text(value) if kind == VALUE else kind


def rint_store_text(store: tuple) -> str:
    return kernel.format_element(store)


@dataclass(frozen=True)
class CaseResult:
    program: str
    store: tuple
    op: str
    den: str
    verdict: str


@dataclass
class ConformanceReport:
    cases: list = field(default_factory=list)

    def add(self, program_text, store, op_kind, op_val, den_kind, den_val):
        if op_kind == FUEL_OUT or den_kind == FUEL_OUT:
            verdict = "unknown"
        elif op_kind == den_kind and op_val == den_val:
            verdict = "agree"
        else:
            verdict = "disagree"
        self.cases.append(CaseResult(
            program=program_text,
            store=store,
            op=_show(op_kind, op_val),
            den=_show(den_kind, den_val),
            verdict=verdict,
        ))

    def count(self, verdict) -> int:
        return sum(1 for c in self.cases if c.verdict == verdict)

    @property
    def agree(self):
        return self.count("agree")

    @property
    def disagree(self):
        return self.count("disagree")

    @property
    def unknown(self):
        return self.count("unknown")

    def disagreements(self):
        return [c for c in self.cases if c.verdict == "disagree"]

    def unknowns(self):
        return [c for c in self.cases if c.verdict == "unknown"]

    def to_dict(self) -> dict:
        return {
            "summary": {
                "agree": self.agree,
                "disagree": self.disagree,
                "unknown": self.unknown,
            },
            "cases": [
                {
                    "program": c.program,
                    "store": list(c.store),
                    "op": c.op,
                    "den": c.den,
                    "verdict": c.verdict,
                }
                for c in self.cases
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def check_soundness_adequacy(prog: RintProgram, m: int = 5, fuel: int = 10000,
                             report: ConformanceReport | None = None,
                             env: denote.SemanticEnv | None = None) -> ConformanceReport:
    """Compare every finite store's big-step run against the lowered denotation."""
    if report is None:
        report = ConformanceReport()
    if env is None:
        env = rint.semantic_env(prog.k, m)
    text = rint.print_program(prog)
    expr = denote.denote_cmd(prog.body, env)
    lowered = denote.lower_to_fin(expr, env.store_carrier())
    for store in rint.all_stores(prog.k, m):
        op_kind, op_val = operational_outcome(prog, store, m, fuel)
        den_kind, den_val = fin_outcome(lowered, store)
        report.add(text, store, op_kind, op_val, den_kind, den_val)
    return report


def conformance_sweep(size: int, k: int = 2, m: int = 5, fuel: int = 10000,
                      consts=(-1, 0, 1)) -> ConformanceReport:
    """Soundness/adequacy over every program of at most the given size."""
    report = ConformanceReport()
    env = rint.semantic_env(k, m)
    for prog in enumerate_programs(size, k, consts):
        check_soundness_adequacy(prog, m, fuel, report=report, env=env)
    return report


# ---------------------------------------------------------------------------
# observational equivalence vs equality of denotations


@dataclass(frozen=True)
class EquivalenceResult:
    op_equivalent: bool
    den_equal: bool
    conclusive: bool  # False when some run exhausted its fuel

    @property
    def holds(self) -> bool:
        # the two notions must coincide
        return self.op_equivalent == self.den_equal


def check_full_abstraction(p1: RintProgram, p2: RintProgram, m: int = 5,
                           fuel: int = 10000) -> EquivalenceResult:
    """Same observable behaviour on every finite store iff same denotation."""
    if p1.k != p2.k:
        raise ValueError("programs disagree on variable count")
    env = rint.semantic_env(p1.k, m)
    sigma = env.store_carrier()
    conclusive = True
    op_equivalent = True
    for store in rint.all_stores(p1.k, m):
        k1, v1 = operational_outcome(p1, store, m, fuel)
        k2, v2 = operational_outcome(p2, store, m, fuel)
        if k1 == FUEL_OUT or k2 == FUEL_OUT:
            conclusive = False
            continue
        if (k1, v1) != (k2, v2):
            op_equivalent = False
    d1 = denote.lower_to_fin(denote.denote_cmd(p1.body, env), sigma)
    d2 = denote.lower_to_fin(denote.denote_cmd(p2.body, env), sigma)
    return EquivalenceResult(op_equivalent, equals(d1, d2), conclusive)


# ---------------------------------------------------------------------------
# inversion


def check_inversion(prog: RintProgram, m: int = 5) -> bool:
    """Denotation of the inverse equals the converse of the denotation."""
    env = rint.semantic_env(prog.k, m)
    sigma = env.store_carrier()
    fwd = denote.lower_to_fin(denote.denote_cmd(prog.body, env), sigma)
    bwd = denote.lower_to_fin(
        denote.denote_cmd(inverter.invert_program(prog).body, env), sigma)
    return equals(bwd, dagger(fwd))


def inversion_roundtrip_ok(prog: RintProgram, m: int = 5, fuel: int = 10000) -> bool:
    """Wherever the program runs, the inverse maps the result back."""
    inv = inverter.invert_program(prog)
    for store in rint.all_stores(prog.k, m):
        kind, out = operational_outcome(prog, store, m, fuel)
        if kind != VALUE:
            continue
        back_kind, back = operational_outcome(inv, out, m, fuel)
        if back_kind != VALUE or back != store:
            return False
    return True


# ---------------------------------------------------------------------------
# program enumeration

_pred_memo: dict = {}
_cmd_memo: dict = {}
_cmd1_memo: dict = {}


def _preds(size: int, k: int) -> list:
    # control-position predicates: literals, zero tests, negations
    key = (size, k)
    if key not in _pred_memo:
        if size < 1:
            out = []
        elif size == 1:
            out = [TT(), FF()] + [Elem(VarZero(i)) for i in range(1, k + 1)]
        else:
            out = [Not(p) for p in _preds(size - 1, k)]
        _pred_memo[key] = out
    return _pred_memo[key]


def _atoms(k: int, consts: tuple) -> list:
    out = [Skip()]
    out += [Atomic(AddVar(i, j)) for i in range(1, k + 1)
            for j in range(1, k + 1) if j != i]
    out += [Atomic(SubVar(i, j)) for i in range(1, k + 1)
            for j in range(1, k + 1) if j != i]
    out += [Atomic(AddConst(i, n)) for i in range(1, k + 1) for n in consts]
    return out


def _cmds1(size: int, k: int, consts: tuple) -> list:
    # commands that are not sequences
    key = (size, k, consts)
    if key in _cmd1_memo:
        return _cmd1_memo[key]
    out = []
    if size == 1:
        out = _atoms(k, consts)
    elif size >= 4:
        inner = size - 1
        for sp in range(1, inner - 1):
            for sb in range(1, inner - sp):
                sq = inner - sp - sb
                for p in _preds(sp, k):
                    for body in _cmds(sb, k, consts):
                        for q in _preds(sq, k):
                            out.append(From(p, body, q))
        if size >= 5:
            for sp in range(1, inner - 2):
                for s1 in range(1, inner - sp - 1):
                    for s2 in range(1, inner - sp - s1):
                        sq = inner - sp - s1 - s2
                        for p in _preds(sp, k):
                            for c1 in _cmds(s1, k, consts):
                                for c2 in _cmds(s2, k, consts):
                                    for q in _preds(sq, k):
                                        out.append(If(p, c1, c2, q))
    _cmd1_memo[key] = out
    return out


def _cmds(size: int, k: int, consts: tuple) -> list:
    key = (size, k, consts)
    if key in _cmd_memo:
        return _cmd_memo[key]
    out = list(_cmds1(size, k, consts))
    # sequences: head is never itself a sequence, mirroring the grammar
    for s1 in range(1, size - 1):
        for fst in _cmds1(s1, k, consts):
            for snd in _cmds(size - 1 - s1, k, consts):
                out.append(Seq(fst, snd))
    _cmd_memo[key] = out
    return out


def enumerate_programs(size: int, k: int = 2, consts=(-1, 0, 1)):
    """Every well-formed program of at most `size` nodes, smallest first.

    Deterministic order: by size, then atomics before loops before
    conditionals before sequences, components in enumeration order.
    """
    consts = tuple(consts)
    for n in range(1, size + 1):
        for body in _cmds(n, k, consts):
            yield RintProgram(k=k, body=body)


def program_size(c) -> int:
    if isinstance(c, RintProgram):
        return program_size(c.body)
    if isinstance(c, (Skip, Atomic)):
        return 1
    if isinstance(c, Seq):
        return 1 + program_size(c.fst) + program_size(c.snd)
    if isinstance(c, If):
        return 1 + _pred_size(c.p) + program_size(c.c1) + program_size(c.c2) + _pred_size(c.q)
    if isinstance(c, (From, flowchart.Loop)):
        return 1 + _pred_size(c.p) + program_size(c.body) + _pred_size(c.q)
    raise TypeError(f"not a command: {c!r}")


def _pred_size(p) -> int:
    if isinstance(p, (TT, FF, Elem)):
        return 1
    if isinstance(p, Not):
        return 1 + _pred_size(p.arg)
    if isinstance(p, (flowchart.And, flowchart.Or)):
        return 1 + _pred_size(p.lhs) + _pred_size(p.rhs)
    raise TypeError(f"not a predicate: {p!r}")


# ---------------------------------------------------------------------------
# randomised law checking for the finite kernel


@dataclass
class AxiomReport:
    seed: int
    cases: int
    carrier_max: int
    checks_run: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def rand_carrier(rng: random.Random, max_size: int, lo: int = 0) -> Carrier:
    return Carrier(range(lo, lo + rng.randint(0, max_size)))


def rand_pinj(rng: random.Random, a: Carrier, b: Carrier) -> PartialInjection:
    n = rng.randint(0, min(len(a), len(b)))
    xs = rng.sample(list(a), n)
    ys = rng.sample(list(b), n)
    return PartialInjection(a, b, dict(zip(xs, ys)))


def rand_total_bijection(rng: random.Random, a: Carrier) -> PartialInjection:
    ys = list(a)
    rng.shuffle(ys)
    return PartialInjection(a, a, dict(zip(list(a), ys)))


def rand_restrict(rng: random.Random, f: PartialInjection) -> PartialInjection:
    items = list(f.graph.items())
    n = rng.randint(0, len(items))
    return PartialInjection(f.dom, f.cod, dict(rng.sample(items, n)))


def rand_sum_endo(rng: random.Random, a: Carrier, b: Carrier, u: Carrier) -> PartialInjection:
    """Random morphism a + u -> b + u, the shape the trace consumes."""
    return rand_pinj(rng, oplus_carrier(a, u), oplus_carrier(b, u))


def join_is_upper_bound(parts, candidate) -> bool:
    return all(leq(p, candidate) for p in parts)


def axiom_suite(seed: int = 0, cases: int = 1000, carrier_max: int = 8) -> AxiomReport:
    """Sample morphisms and check the kernel's laws on each sample."""
    rng = random.Random(seed)
    report = AxiomReport(seed=seed, cases=cases, carrier_max=carrier_max)
    case = 0

    def check(name, cond, detail=""):
        report.checks_run += 1
        if not cond:
            extra = f" ({detail})" if detail else ""
            report.violations.append(f"{name}: case {case} seed {seed}{extra}")

    for case in range(cases):
        A = rand_carrier(rng, carrier_max)
        B = rand_carrier(rng, carrier_max, lo=100)
        C = rand_carrier(rng, carrier_max, lo=200)
        f = rand_pinj(rng, A, B)
        f2 = rand_pinj(rng, A, B)
        g = rand_pinj(rng, B, C)
        h = rand_pinj(rng, A, C)

        # restriction laws
        check("restriction-fixes-domain", equals(compose(f, restriction(f)), f))
        check("restrictions-commute",
              equals(compose(restriction(f), restriction(h)),
                     compose(restriction(h), restriction(f))))
        check("restriction-of-restricted-compose",
              equals(restriction(compose(f, restriction(h))),
                     compose(restriction(f), restriction(h))))
        check("restriction-slides",
              equals(compose(restriction(g), f),
                     compose(f, restriction(compose(g, f)))))
        check("identity-restriction", equals(restriction(identity(A)), identity(A)))
        check("restriction-idempotent", equals(restriction(restriction(f)), restriction(f)))
        check("restriction-absorbs",
              equals(compose(restriction(compose(g, f)), restriction(f)),
                     restriction(compose(g, f))))
        check("restriction-inner-drop",
              equals(restriction(compose(restriction(g), f)),
                     restriction(compose(g, f))))
        perm = rand_total_bijection(rng, B)
        check("total-post-restriction",
              equals(restriction(compose(perm, f)), restriction(f)))
        if len(compose(g, f).graph) == len(A):
            check("total-composition-forces-total", len(f.graph) == len(A))

        # converse laws
        check("dagger-restriction", equals(compose(dagger(f), f), restriction(f)))
        check("dagger-corestriction",
              equals(compose(f, dagger(f)), restriction(dagger(f))))
        check("dagger-involution", equals(dagger(dagger(f)), f))

        # order, compatibility, disjointness against their defining formulas
        fsub = rand_restrict(rng, f)
        check("order-contains-restricts", leq(fsub, f))
        check("order-via-restriction",
              leq(f, f2) == equals(compose(f2, restriction(f)), f))
        check("order-via-restriction-sub",
              leq(fsub, f) == equals(compose(f, restriction(fsub)), fsub))
        check("compatible-formula",
              compatible(f, f2) == (
                  equals(compose(f, restriction(f2)), compose(f2, restriction(f)))
                  and equals(compose(dagger(f), restriction(dagger(f2))),
                             compose(dagger(f2), restriction(dagger(f))))))
        check("disjoint-formula",
              disjoint(f, f2) == (
                  equals(compose(f, restriction(f2)), zero(A, B))
                  and equals(compose(dagger(f), restriction(dagger(f2))), zero(B, A))))

        # joins of compatible families
        parts = [rand_restrict(rng, f) for _ in range(3)]
        j = join(parts)
        check("join-upper-bound", join_is_upper_bound(parts, j))
        check("join-least", leq(j, f))
        check("join-restriction",
              equals(restriction(j), join([restriction(p) for p in parts])))
        check("join-post-compose",
              equals(compose(g, j), join([compose(g, p) for p in parts])))
        pre = rand_pinj(rng, C, A)
        check("join-pre-compose",
              equals(compose(j, pre), join([compose(p, pre) for p in parts])))
        if compatible(f, f2):
            check("join-of-compatible", join_is_upper_bound([f, f2], join([f, f2])))
        else:
            try:
                join([f, f2])
                check("join-incompatible-raises", False)
            except IncompatibleJoin:
                check("join-incompatible-raises", True)

        # taggers and symmetry
        i1, i2 = inj1(A, B), inj2(A, B)
        check("tagger-total",
              equals(restriction(i1), identity(A)) and equals(restriction(i2), identity(B)))
        check("tagger-converse-restrictions",
              equals(restriction(dagger(i1)), oplus(identity(A), zero(B, B)))
              and equals(restriction(dagger(i2)), oplus(zero(A, A), identity(B))))
        check("tagger-orthogonal",
              equals(compose(dagger(i1), i1), identity(A))
              and equals(compose(dagger(i2), i2), identity(B))
              and equals(compose(dagger(i2), i1), zero(A, B))
              and equals(compose(dagger(i1), i2), zero(B, A)))
        check("symmetry-swaps-taggers",
              equals(compose(gamma(A, B), i1), inj2(B, A))
              and equals(compose(gamma(A, B), i2), inj1(B, A)))
        check("symmetry-involution",
              equals(compose(gamma(B, A), gamma(A, B)), identity(oplus_carrier(A, B))))
        check("tensor-restriction",
              equals(restriction(oplus(f, g)), oplus(restriction(f), restriction(g))))
        check("tensor-dagger",
              equals(dagger(oplus(f, g)), oplus(dagger(f), dagger(g))))

        # decisions
        fdec = rand_pinj(rng, A, oplus_carrier(B, C))
        dec = decision_of(fdec)
        i1aa, i2aa = inj1(A, A), inj2(A, A)
        w1 = compose(dagger(i1aa), dec)
        w2 = compose(dagger(i2aa), dec)
        check("decision-partition", equals(join([w1, w2]), restriction(fdec)))
        check("decision-routes",
              equals(compose(oplus(fdec, fdec), dec),
                     compose(oplus(inj1(B, C), inj2(B, C)), fdec)))
        check("decision-witness-idempotent", equals(w1, restriction(w1)))
        check("tagger-restrictions-cover",
              equals(join([restriction(dagger(i1aa)), restriction(dagger(i2aa))]),
                     identity(oplus_carrier(A, A))))
        check("decision-recombines",
              equals(dec, join([compose(i1aa, restriction(w1)),
                                compose(i2aa, restriction(w2))])))
        check("decision-preserves-definedness",
              equals(restriction(dec), restriction(fdec)))
        check("decision-join-construction",
              equals(dec, join([
                  compose(i1aa, restriction(compose(dagger(inj1(B, C)), fdec))),
                  compose(i2aa, restriction(compose(dagger(inj2(B, C)), fdec))),
              ])))

        # trace
        U = rand_carrier(rng, min(carrier_max, 6), lo=300)
        fsum = rand_sum_endo(rng, A, B, U)
        check("trace-orbit-vs-join", equals(trace(fsum), trace_by_join(fsum)))
        check("trace-dagger", equals(dagger(trace(fsum)), trace(dagger(fsum))))

    return report
