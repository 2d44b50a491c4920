"""Harness pieces: reports, sweeps, enumeration, equivalence, law suite."""

import json
import random

import pytest

from revflow import rint
from revflow.conformance import (
    AxiomReport,
    ConformanceReport,
    axiom_suite,
    check_full_abstraction,
    check_inversion,
    check_soundness_adequacy,
    conformance_sweep,
    enumerate_programs,
    inversion_roundtrip_ok,
    join_is_upper_bound,
    program_size,
    rand_carrier,
    rand_pinj,
    rand_total_bijection,
    rint_store_text,
)
from revflow.kernel import Carrier, IncompatibleJoin, join
from revflow.rint import AddConst, AddVar, SubVar


# --- report plumbing ---------------------------------------------------------


def test_empty_report_serialises_to_the_golden_form():
    rep = ConformanceReport()
    assert rep.to_json() == '{"summary":{"agree":0,"disagree":0,"unknown":0},"cases":[]}'


def test_one_agreeing_case():
    rep = ConformanceReport()
    rep.add("skip", (0, 0), "value", (0, 0), "value", (0, 0))
    assert rep.agree == 1 and rep.disagree == 0 and rep.unknown == 0
    doc = rep.to_dict()
    assert doc["summary"] == {"agree": 1, "disagree": 0, "unknown": 0}
    case = doc["cases"][0]
    assert case["program"] == "skip"
    assert case["store"] == [0, 0]
    assert case["verdict"] == "agree"


def test_fuel_out_makes_a_case_unknown():
    rep = ConformanceReport()
    rep.add("p", (0, 0), "fuel-out", None, "value", (0, 0))
    assert rep.unknown == 1
    assert rep.unknowns()[0].verdict == "unknown"


def test_kind_mismatch_is_a_disagreement():
    rep = ConformanceReport()
    rep.add("p", (0, 0), "value", (1, 0), "undefined", None)
    rep.add("p", (0, 1), "value", (1, 1), "value", (2, 2))
    assert rep.disagree == 2
    assert [c.store for c in rep.disagreements()] == [(0, 0), (0, 1)]


def test_report_json_round_trips():
    rep = ConformanceReport()
    rep.add("skip", (4, 1), "undefined", None, "undefined", None)
    doc = json.loads(rep.to_json())
    assert doc["cases"][0]["op"] == "undefined"
    assert doc["summary"]["agree"] == 1


def test_store_text_is_compact():
    assert rint_store_text((3, 0)) == "(3,0)"


# --- soundness / adequacy ----------------------------------------------------


def test_skip_agrees_everywhere():
    rep = check_soundness_adequacy(rint.parse("skip", k=2))
    assert rep.agree == 25 and rep.disagree == 0


def test_worked_loop_agrees_everywhere(loop_prog):
    rep = check_soundness_adequacy(loop_prog)
    assert rep.agree == 25 and rep.disagree == 0


def test_mismatched_assertions_are_undefined_on_both_sides():
    prog = rint.parse("if x1 then skip else skip fi x2")
    rep = check_soundness_adequacy(prog)
    assert rep.disagree == 0
    undef = {c.store for c in rep.cases if c.op == "undefined"}
    want = {(a, b) for a in range(5) for b in range(5)
            if (a == 0) != (b == 0)}
    assert undef == want


def test_small_sweep_is_clean():
    rep = conformance_sweep(1)
    assert len(rep.cases) == 11 * 25
    assert rep.agree == len(rep.cases)


# --- enumeration -------------------------------------------------------------


def test_size_one_programs_are_the_eleven_atoms():
    progs = [p.body for p in enumerate_programs(1, k=2)]
    from revflow.flowchart import Atomic, Skip

    assert progs[0] == Skip()
    ops = [c.op for c in progs[1:]]
    assert AddVar(1, 2) in ops and AddVar(2, 1) in ops
    assert SubVar(1, 2) in ops and SubVar(2, 1) in ops
    assert AddConst(1, -1) in ops and AddConst(2, 1) in ops
    assert AddVar(1, 1) not in ops and SubVar(2, 2) not in ops
    assert len(progs) == 11


def test_size_zero_is_empty():
    assert list(enumerate_programs(0, k=2)) == []


def test_enumeration_is_deterministic():
    a = [rint.print_program(p) for p in enumerate_programs(4, k=2)]
    b = [rint.print_program(p) for p in enumerate_programs(4, k=2)]
    assert a == b


def counted(k, pool, bound):
    """Independent size-indexed counting recurrence for the program grammar.

    Sizes count syntax-tree nodes.  Control predicates draw from
    tt/ff/zero-tests under repeated negation, so their count per size is
    constant; sequences are right-nested, matching what the parser builds.
    """
    preds = {n: 2 + k for n in range(1, bound + 1)}
    atoms = 1 + 2 * k * (k - 1) + k * len(pool)
    c1 = {n: 0 for n in range(bound + 1)}   # commands that are not sequences
    c = {n: 0 for n in range(bound + 1)}
    c1[1] = atoms
    c[1] = atoms
    for n in range(2, bound + 1):
        total = 0
        for pa in range(1, n):
            for bbody in range(1, n - pa):
                pb = n - 1 - pa - bbody
                if pb >= 1:
                    total += preds[pa] * c[bbody] * preds[pb]
        for pa in range(1, n):
            for b1 in range(1, n - pa):
                for b2 in range(1, n - pa - b1):
                    pb = n - 1 - pa - b1 - b2
                    if pb >= 1:
                        total += preds[pa] * c[b1] * c[b2] * preds[pb]
        c1[n] = total
        c[n] = total
        for fst in range(1, n - 1):
            c[n] += c1[fst] * c[n - 1 - fst]
    return c


def test_counting_recurrence_matches_the_enumerator():
    by_size = {}
    for p in enumerate_programs(5, k=2):
        by_size.setdefault(program_size(p.body), []).append(p)
    want = counted(2, (-1, 0, 1), 5)
    for n in range(1, 6):
        assert len(by_size.get(n, [])) == want[n], n


def test_every_enumerated_program_fits_its_bound(corpus5):
    for p in corpus5:
        assert 1 <= program_size(p.body) <= 5


# --- equivalence and inversion ----------------------------------------------


def test_cancelling_increment_is_equivalent_to_skip():
    r = check_full_abstraction(rint.parse("x1 += 1; x1 += -1", k=2),
                               rint.parse("skip", k=2))
    assert r.op_equivalent and r.den_equal and r.conclusive and r.holds


def test_increment_is_not_equivalent_to_skip():
    r = check_full_abstraction(rint.parse("x1 += 1", k=2),
                               rint.parse("skip", k=2))
    assert not r.op_equivalent and not r.den_equal
    assert r.holds  # the biconditional is satisfied by both sides failing


def test_true_conditional_collapses_to_its_then_branch():
    r = check_full_abstraction(rint.parse("if tt then skip else x1 += 1 fi tt", k=2),
                               rint.parse("skip", k=2))
    assert r.op_equivalent and r.den_equal and r.holds


def test_inversion_checks_on_the_worked_loop(loop_prog):
    assert check_inversion(loop_prog)
    assert inversion_roundtrip_ok(loop_prog)


# --- randomised-structure helpers and the law suite --------------------------


def test_rand_pinj_is_well_formed():
    rng = random.Random(7)
    for _ in range(200):
        a = rand_carrier(rng, 6, lo=0)
        b = rand_carrier(rng, 6, lo=50)
        f = rand_pinj(rng, a, b)  # constructor validates injectivity
        assert set(f.graph) <= set(a.elements)
        assert set(f.graph.values()) <= set(b.elements)


def test_rand_total_bijection_covers_the_carrier():
    rng = random.Random(7)
    a = rand_carrier(rng, 6, lo=0)
    f = rand_total_bijection(rng, a)
    assert sorted(f.graph) == list(a.elements)
    assert sorted(f.graph.values()) == list(a.elements)


def test_join_upper_bound_flags_a_corrupted_join():
    a = Carrier([1, 2, 3])
    from revflow.kernel import PartialInjection

    f = PartialInjection(a, a, {1: 2})
    g = PartialInjection(a, a, {3: 1})
    good = join([f, g])
    assert join_is_upper_bound([f, g], good)
    corrupted = PartialInjection(a, a, {1: 2})  # lost g's pair
    assert not join_is_upper_bound([f, g], corrupted)


def test_incompatible_pair_refuses_to_join():
    a = Carrier([1, 2, 3])
    from revflow.kernel import PartialInjection

    f = PartialInjection(a, a, {1: 2})
    g = PartialInjection(a, a, {1: 3})
    with pytest.raises(IncompatibleJoin):
        join([f, g])


def test_axiom_suite_small_run_is_clean():
    rep = axiom_suite(seed=3, cases=40, carrier_max=6)
    assert rep.ok
    assert rep.checks_run > 1000
    assert rep.violations == []


def test_axiom_suite_handles_degenerate_carriers():
    rep = axiom_suite(seed=1, cases=30, carrier_max=1)
    assert rep.ok


def test_axiom_report_ok_reflects_violations():
    rep = AxiomReport(seed=0, cases=1, carrier_max=1, checks_run=5,
                      violations=["restriction-fixes-domain: case 0 seed 0"])
    assert not rep.ok
