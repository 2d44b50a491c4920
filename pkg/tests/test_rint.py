"""Surface language: lexer, parser, printer, and the elementary steps."""

from hypothesis import given, strategies as st
import pytest

from revflow import rint
from revflow.flowchart import (
    And, Atomic, Elem, FF, From, If, Loop, Not, Or, Seq, Skip, TT,
)
from revflow.rint import (
    AddConst,
    AddVar,
    ParseError,
    RintProgram,
    SubVar,
    ValidationError,
    VarZero,
    all_stores,
    elem_pred,
    elem_step,
    invert_elem,
    parse,
    print_cmd,
    print_pred,
    print_program,
)


# --- elementary steps --------------------------------------------------------


def test_add_var_updates_target_slot_only():
    assert elem_step(AddVar(1, 2), (3, 4)) == (7, 4)


def test_sub_var_undoes_add_var():
    assert elem_step(SubVar(1, 2), (7, 4)) == (3, 4)


def test_add_const_zero_is_identity():
    assert elem_step(AddConst(1, 0), (9, 2)) == (9, 2)


def test_modular_reduction_applies_to_the_written_slot():
    assert elem_step(AddConst(1, 3), (4, 0), m=5) == (2, 0)
    assert elem_step(AddVar(2, 1), (4, 3), m=5) == (4, 2)


def test_zero_test_reads_one_slot():
    assert elem_pred(1, (0, 5)) is True
    assert elem_pred(2, (0, 5)) is False


def test_zero_test_sees_residues():
    assert elem_pred(1, (5, 5), m=5) is True
    assert elem_pred(1, (4, 5), m=5) is False


def test_invert_elem_swaps_add_and_sub():
    assert invert_elem(AddVar(1, 2)) == SubVar(1, 2)
    assert invert_elem(SubVar(1, 2)) == AddVar(1, 2)
    assert invert_elem(AddConst(1, 5)) == AddConst(1, -5)


OPS = [AddVar(1, 2), AddVar(2, 1), SubVar(1, 2), SubVar(2, 1),
       AddConst(1, -1), AddConst(1, 7), AddConst(2, 0)]


@given(st.sampled_from(OPS), st.tuples(st.integers(), st.integers()))
def test_invert_elem_is_an_involution_and_an_inverse(op, s):
    assert invert_elem(invert_elem(op)) == op
    assert elem_step(invert_elem(op), elem_step(op, s)) == s


@given(st.sampled_from(OPS))
def test_each_op_permutes_the_finite_stores(op):
    stores = list(all_stores(2, 5))
    image = [elem_step(op, s, m=5) for s in stores]
    assert sorted(image) == stores


def test_all_stores_is_lexicographic():
    assert list(all_stores(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(all_stores(2, 5))) == 25


# --- parsing -----------------------------------------------------------------


def test_parse_skip():
    assert parse("skip").body == Skip()


def test_parse_worked_loop_shape():
    prog = parse("from x1 do x1 += 1; x2 += -1 until x2")
    assert prog.k == 2
    assert prog.body == From(
        Elem(VarZero(1)),
        Seq(Atomic(AddConst(1, 1)), Atomic(AddConst(2, -1))),
        Elem(VarZero(2)),
    )


def test_parse_records_positions():
    prog = parse("skip;\nif tt then skip else skip fi tt")
    assert prog.body.snd.pos == (2, 1)


def test_parse_infers_variable_count():
    assert parse("skip").k == 1
    assert parse("x2 += x1").k == 2
    assert parse("skip", k=3).k == 3


def test_self_update_is_rejected():
    with pytest.raises(ValidationError) as exc:
        parse("x1 += x1")
    assert exc.value.msg == "x1 cannot update from itself"


def test_variable_out_of_range_is_rejected():
    with pytest.raises(ValidationError) as exc:
        parse("x3 += x1", k=2)
    assert exc.value.msg == "variable x3 out of range for 2 variables"


def test_loop_form_is_not_source_syntax():
    with pytest.raises(ValidationError):
        rint.validate_program(RintProgram(2, Loop(TT(), Skip(), FF())))


def test_comments_and_newlines_are_whitespace():
    prog = parse("# set up\nx1 += 1; # bump\nx2 -= x1\n")
    assert prog.body == Seq(Atomic(AddConst(1, 1)), Atomic(SubVar(2, 1)))


def test_seq_is_right_associative():
    prog = parse("skip; skip; x1 += 1")
    assert prog.body == Seq(Skip(), Seq(Skip(), Atomic(AddConst(1, 1))))


def test_sequence_inside_branches():
    prog = parse("if tt then x1 += 1; skip else skip fi tt")
    assert prog.body.c1 == Seq(Atomic(AddConst(1, 1)), Skip())


def test_predicate_precedence_or_binds_loosest():
    prog = parse("if x1 and x2 or not x1 then skip else skip fi tt")
    p = prog.body.p
    assert p == Or(And(Elem(VarZero(1)), Elem(VarZero(2))), Not(Elem(VarZero(1))))


def test_parens_override_precedence():
    prog = parse("if x1 and (x2 or not x1) then skip else skip fi tt")
    p = prog.body.p
    assert p == And(Elem(VarZero(1)), Or(Elem(VarZero(2)), Not(Elem(VarZero(1)))))


GOLDEN_ERRORS = [
    ("", 1, 1, "expected command, found end of input"),
    ("skip skip", 1, 6, "expected end of input, found 'skip'"),
    ("x1 +=", 1, 6, "expected variable or integer, found end of input"),
    ("x0 += x2", 1, 1, "unknown word 'x0'"),
    ("x1 = 1", 1, 4, "unexpected character '='"),
    ("x1 += -", 1, 7, "expected '=' or a digit after '-'"),
    ("x1 ++ x2", 1, 4, "expected '=' after '+'"),
]


@pytest.mark.parametrize("src,line,col,msg", GOLDEN_ERRORS)
def test_parse_error_diagnostics(src, line, col, msg):
    with pytest.raises(ParseError) as exc:
        parse(src)
    assert (exc.value.line, exc.value.col, exc.value.msg) == (line, col, msg)
    assert str(exc.value) == f"line {line}, col {col}: {msg}"


# --- printing ----------------------------------------------------------------


def test_print_atoms():
    assert print_cmd(Skip()) == "skip"
    assert print_cmd(Atomic(AddConst(1, -1))) == "x1 += -1"
    assert print_cmd(Atomic(SubVar(2, 1))) == "x2 -= x1"


def test_print_flattens_sequences():
    c = Seq(Skip(), Seq(Skip(), Skip()))
    assert print_cmd(c) == "skip; skip; skip"


def test_print_pred_inserts_needed_parens():
    a, b, c = Elem(VarZero(1)), Elem(VarZero(2)), TT()
    assert print_pred(Or(And(a, b), c)) == "x1 and x2 or tt"
    assert print_pred(And(Or(a, b), c)) == "(x1 or x2) and tt"
    assert print_pred(Not(And(a, b))) == "not (x1 and x2)"
    assert print_pred(Not(a)) == "not x1"


def test_print_loop_form_is_an_error():
    with pytest.raises(ValueError):
        print_cmd(Loop(TT(), Skip(), FF()))


def test_worked_loop_round_trips(loop_prog):
    text = print_program(loop_prog)
    assert text == "from x1 do x1 += 1; x2 += -1 until x2"
    assert parse(text) == loop_prog


# --- randomised round trip ---------------------------------------------------


def preds(depth):
    leaf = st.sampled_from([TT(), FF(), Elem(VarZero(1)), Elem(VarZero(2))])
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
        ),
        max_leaves=depth,
    )


ATOM_CMDS = st.sampled_from(
    [Skip(), Atomic(AddVar(1, 2)), Atomic(SubVar(2, 1)),
     Atomic(AddConst(1, -3)), Atomic(AddConst(2, 12))])


@st.composite
def cmds(draw, depth=3):
    if depth == 0:
        return draw(ATOM_CMDS)
    kind = draw(st.sampled_from(["atom", "atom", "seq", "if", "from"]))
    if kind == "atom":
        return draw(ATOM_CMDS)
    if kind == "seq":
        # right-nested, the only shape the grammar produces
        return Seq(draw(cmds(depth=0)), draw(cmds(depth=depth - 1)))
    if kind == "if":
        return If(draw(preds(3)), draw(cmds(depth=depth - 1)),
                  draw(cmds(depth=depth - 1)), draw(preds(3)))
    return From(draw(preds(3)), draw(cmds(depth=depth - 1)), draw(preds(3)))


@given(cmds())
def test_print_then_parse_is_identity(c):
    prog = RintProgram(2, c)
    assert parse(print_program(prog), k=2) == prog
