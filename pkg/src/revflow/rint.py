"""The rint language: k integer variables, reversible updates, zero tests.

Concrete syntax (comments run from '#' to end of line):

    program := cmd EOF
    cmd     := cmd1 (';' cmd)?
    cmd1    := 'skip' | VAR '+=' VAR | VAR '-=' VAR | VAR '+=' INT
             | 'if' pred 'then' cmd 'else' cmd 'fi' pred
             | 'from' pred 'do' cmd 'until' pred
    pred    := pand ('or' pred)?
    pand    := punit ('and' pand)?
    punit   := 'tt' | 'ff' | VAR | 'not' punit | '(' pred ')'
    VAR     := 'x' [1-9][0-9]*
    INT     := '-'? [0-9]+

A variable used as a predicate holds when its value is zero.  Stores are
tuples of k integers; with a modulus m every update is taken mod m, making
each atomic step a bijection on the finite store space.  Updates never read
the slot they write (sources must differ from targets), which is what makes
them invertible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from revflow import denote
from revflow.arrows import Prim
from revflow.flowchart import (
    And, Atomic, Cmd, Elem, FF, From, If, Loop, Not, Or, Pred, Seq, Skip, TT,
)
from revflow.kernel import Carrier, L, R


# ---------------------------------------------------------------------------
# atomic ops and elementary predicates


@dataclass(frozen=True)
class AddVar:
    i: int
    j: int

    def __str__(self):
        return f"x{self.i} += x{self.j}"


@dataclass(frozen=True)
class SubVar:
    i: int
    j: int

    def __str__(self):
        return f"x{self.i} -= x{self.j}"


@dataclass(frozen=True)
class AddConst:
    i: int
    n: int

    def __str__(self):
        return f"x{self.i} += {self.n}"


@dataclass(frozen=True)
class VarZero:
    i: int

    def __str__(self):
        return f"x{self.i}"


def elem_step(op, store: tuple, m: int | None = None) -> tuple:
    """Apply one atomic update; total, touches only slot op.i."""
    out = list(store)
    if isinstance(op, AddVar):
        out[op.i - 1] = store[op.i - 1] + store[op.j - 1]
    elif isinstance(op, SubVar):
        out[op.i - 1] = store[op.i - 1] - store[op.j - 1]
    elif isinstance(op, AddConst):
        out[op.i - 1] = store[op.i - 1] + op.n
    else:
        raise TypeError(f"not an atomic op: {op!r}")
    if m is not None:
        out[op.i - 1] %= m
    return tuple(out)


def invert_elem(op):
    """Inverse atomic op: step(invert_elem(op)) undoes step(op)."""
    if isinstance(op, AddVar):
        return SubVar(op.i, op.j)
    if isinstance(op, SubVar):
        return AddVar(op.i, op.j)
    if isinstance(op, AddConst):
        return AddConst(op.i, -op.n)
    raise TypeError(f"not an atomic op: {op!r}")


def elem_pred(i: int, store: tuple, m: int | None = None) -> bool:
    """Zero test of slot i."""
    v = store[i - 1]
    if m is not None:
        v %= m
    return v == 0


def all_stores(k: int, m: int) -> list[tuple]:
    """Every store of Z_m^k in ascending order."""
    return [tuple(s) for s in itertools.product(range(m), repeat=k)]


class RintEnv:
    """Operational environment: resolves atomic ops and zero tests."""

    def __init__(self, k: int, m: int | None = None):
        self.k = k
        self.m = m

    def step_atomic(self, op, store):
        return elem_step(op, store, self.m)

    def eval_elem(self, pid, store):
        return elem_pred(pid.i, store, self.m)


def _atomic_prim(op, m):
    inv = invert_elem(op)
    return Prim(
        name=str(op),
        fwd=lambda s: elem_step(op, s, m),
        bwd=lambda s: elem_step(inv, s, m),
        kind="endo",
    )


def _pred_prim(pid, m):
    i = pid.i

    def fwd(s):
        return L(s) if elem_pred(i, s, m) else R(s)

    def bwd(t):
        if isinstance(t, L):
            return t.value if elem_pred(i, t.value, m) else None
        if isinstance(t, R):
            return t.value if not elem_pred(i, t.value, m) else None
        return None

    return Prim(name=f"x{i}?", fwd=fwd, bwd=bwd, kind="decision")


def semantic_env(k: int, m: int | None = None) -> denote.SemanticEnv:
    """Denotational environment over Z^k, or Z_m^k when m is given."""
    carrier = Carrier(all_stores(k, m)) if m is not None else None
    return denote.SemanticEnv(
        k=k,
        m=m,
        make_atomic=lambda op: _atomic_prim(op, m),
        make_pred=lambda pid: _pred_prim(pid, m),
        carrier=carrier,
    )


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class RintProgram:
    k: int
    body: Cmd


class ParseError(Exception):
    def __init__(self, line, col, msg):
        self.line = line
        self.col = col
        self.msg = msg
        super().__init__(f"line {line}, col {col}: {msg}")


class ValidationError(ParseError):
    pass


# ---------------------------------------------------------------------------
# lexer

_KEYWORDS = {
    "skip", "if", "then", "else", "fi", "from", "do", "until",
    "not", "and", "or", "tt", "ff",
}

_VAR_RE = re.compile(r"x[1-9][0-9]*\Z")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


@dataclass(frozen=True)
class Token:
    kind: str  # keyword text, 'VAR', 'INT', '+=', '-=', ';', '(', ')', 'EOF'
    value: object
    line: int
    col: int


def _lex(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha():
            m = _WORD_RE.match(text, i)
            word = m.group(0)
            i += len(word)
            col += len(word)
            if word in _KEYWORDS:
                tokens.append(Token(word, word, line, start_col))
            elif _VAR_RE.match(word):
                tokens.append(Token("VAR", int(word[1:]), line, start_col))
            else:
                raise ParseError(line, start_col, f"unknown word '{word}'")
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", int(text[i:j]), line, start_col))
            col += j - i
            i = j
            continue
        if ch == "-":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(Token("-=", "-=", line, start_col))
                i += 2
                col += 2
                continue
            if i + 1 < n and text[i + 1].isdigit():
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                tokens.append(Token("INT", -int(text[i + 1:j]), line, start_col))
                col += j - i
                i = j
                continue
            raise ParseError(line, start_col, "expected '=' or a digit after '-'")
        if ch == "+":
            if i + 1 < n and text[i + 1] == "=":
                tokens.append(Token("+=", "+=", line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError(line, start_col, "expected '=' after '+'")
        if ch in ";()":
            tokens.append(Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(line, start_col, f"unexpected character {ch!r}")
    tokens.append(Token("EOF", None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind, what=None) -> Token:
        t = self.peek()
        if t.kind != kind:
            want = what or f"'{kind}'"
            raise ParseError(t.line, t.col, f"expected {want}, found {self._show(t)}")
        return self.next()

    @staticmethod
    def _show(t: Token) -> str:
        if t.kind == "EOF":
            return "end of input"
        if t.kind == "VAR":
            return f"'x{t.value}'"
        if t.kind == "INT":
            return f"'{t.value}'"
        return f"'{t.value}'"

    def parse_cmd(self) -> Cmd:
        c = self.parse_cmd1()
        if self.peek().kind == ";":
            self.next()
            rest = self.parse_cmd()
            return Seq(c, rest, pos=_pos(c))
        return c

    def parse_cmd1(self) -> Cmd:
        t = self.peek()
        pos = (t.line, t.col)
        if t.kind == "skip":
            self.next()
            return Skip(pos=pos)
        if t.kind == "VAR":
            self.next()
            i = t.value
            op_t = self.peek()
            if op_t.kind == "+=":
                self.next()
                arg = self.peek()
                if arg.kind == "VAR":
                    self.next()
                    return Atomic(AddVar(i, arg.value), pos=pos)
                if arg.kind == "INT":
                    self.next()
                    return Atomic(AddConst(i, arg.value), pos=pos)
                raise ParseError(arg.line, arg.col,
                                 f"expected variable or integer, found {self._show(arg)}")
            if op_t.kind == "-=":
                self.next()
                arg = self.expect("VAR", "variable")
                return Atomic(SubVar(i, arg.value), pos=pos)
            raise ParseError(op_t.line, op_t.col,
                             f"expected '+=' or '-=', found {self._show(op_t)}")
        if t.kind == "if":
            self.next()
            p = self.parse_pred()
            self.expect("then")
            c1 = self.parse_cmd()
            self.expect("else")
            c2 = self.parse_cmd()
            self.expect("fi")
            q = self.parse_pred()
            return If(p, c1, c2, q, pos=pos)
        if t.kind == "from":
            self.next()
            p = self.parse_pred()
            self.expect("do")
            body = self.parse_cmd()
            self.expect("until")
            q = self.parse_pred()
            return From(p, body, q, pos=pos)
        raise ParseError(t.line, t.col, f"expected command, found {self._show(t)}")

    def parse_pred(self) -> Pred:
        p = self.parse_pand()
        if self.peek().kind == "or":
            self.next()
            return Or(p, self.parse_pred())
        return p

    def parse_pand(self) -> Pred:
        p = self.parse_punit()
        if self.peek().kind == "and":
            self.next()
            return And(p, self.parse_pand())
        return p

    def parse_punit(self) -> Pred:
        t = self.peek()
        if t.kind == "tt":
            self.next()
            return TT()
        if t.kind == "ff":
            self.next()
            return FF()
        if t.kind == "VAR":
            self.next()
            return Elem(VarZero(t.value))
        if t.kind == "not":
            self.next()
            return Not(self.parse_punit())
        if t.kind == "(":
            self.next()
            p = self.parse_pred()
            self.expect(")")
            return p
        raise ParseError(t.line, t.col, f"expected predicate, found {self._show(t)}")


def _pos(c: Cmd):
    return getattr(c, "pos", None)


def parse(text: str, k: int | None = None) -> RintProgram:
    """Parse and validate a program; k defaults to the largest variable used."""
    parser = _Parser(_lex(text))
    body = parser.parse_cmd()
    t = parser.peek()
    if t.kind != "EOF":
        raise ParseError(t.line, t.col, f"expected end of input, found {parser._show(t)}")
    if k is None:
        k = max(_var_indices(body), default=1)
    prog = RintProgram(k=k, body=body)
    validate_program(prog)
    return prog


def _var_indices(c) -> set[int]:
    out: set[int] = set()

    def pred(p):
        if isinstance(p, Elem):
            out.add(p.pid.i)
        elif isinstance(p, Not):
            pred(p.arg)
        elif isinstance(p, (And, Or)):
            pred(p.lhs)
            pred(p.rhs)

    def cmd(c):
        if isinstance(c, Atomic):
            out.add(c.op.i)
            if isinstance(c.op, (AddVar, SubVar)):
                out.add(c.op.j)
        elif isinstance(c, Seq):
            cmd(c.fst)
            cmd(c.snd)
        elif isinstance(c, (If,)):
            pred(c.p)
            cmd(c.c1)
            cmd(c.c2)
            pred(c.q)
        elif isinstance(c, (From, Loop)):
            pred(c.p)
            cmd(c.body)
            pred(c.q)

    cmd(c)
    return out


def validate_program(prog: RintProgram):
    """Reject out-of-range variables, self-referential updates, Loop nodes."""
    k = prog.k
    if k < 1:
        raise ValidationError(0, 0, f"variable count must be positive, got {k}")

    def bad(pos, msg):
        line, col = pos if pos else (0, 0)
        raise ValidationError(line, col, msg)

    def check_index(i, pos):
        if not 1 <= i <= k:
            bad(pos, f"variable x{i} out of range for {k} variables")

    def pred(p, pos):
        if isinstance(p, Elem):
            check_index(p.pid.i, pos)
        elif isinstance(p, Not):
            pred(p.arg, pos)
        elif isinstance(p, (And, Or)):
            pred(p.lhs, pos)
            pred(p.rhs, pos)

    def cmd(c):
        if isinstance(c, Skip):
            return
        if isinstance(c, Atomic):
            op = c.op
            check_index(op.i, c.pos)
            if isinstance(op, (AddVar, SubVar)):
                check_index(op.j, c.pos)
                if op.i == op.j:
                    bad(c.pos, f"x{op.i} cannot update from itself")
            return
        if isinstance(c, Seq):
            cmd(c.fst)
            cmd(c.snd)
            return
        if isinstance(c, If):
            pred(c.p, c.pos)
            cmd(c.c1)
            cmd(c.c2)
            pred(c.q, c.pos)
            return
        if isinstance(c, From):
            pred(c.p, c.pos)
            cmd(c.body)
            pred(c.q, c.pos)
            return
        if isinstance(c, Loop):
            bad(c.pos, "loop re-entry form is not source syntax")
        raise TypeError(f"not a command: {c!r}")

    cmd(prog.body)


# ---------------------------------------------------------------------------
# printer

def _pp_pred(p: Pred) -> tuple[str, int]:
    # levels: 0 disjunction, 1 conjunction, 2 unit
    if isinstance(p, TT):
        return "tt", 2
    if isinstance(p, FF):
        return "ff", 2
    if isinstance(p, Elem):
        return f"x{p.pid.i}", 2
    if isinstance(p, Not):
        return f"not {_pred_at(p.arg, 2)}", 2
    if isinstance(p, And):
        return f"{_pred_at(p.lhs, 2)} and {_pred_at(p.rhs, 1)}", 1
    if isinstance(p, Or):
        return f"{_pred_at(p.lhs, 1)} or {_pred_at(p.rhs, 0)}", 0
    raise TypeError(f"not a predicate: {p!r}")


def _pred_at(p: Pred, need: int) -> str:
    text, level = _pp_pred(p)
    return f"({text})" if level < need else text


def print_pred(p: Pred) -> str:
    return _pp_pred(p)[0]


def print_cmd(c: Cmd) -> str:
    if isinstance(c, Skip):
        return "skip"
    if isinstance(c, Atomic):
        return str(c.op)
    if isinstance(c, Seq):
        return f"{print_cmd(c.fst)}; {print_cmd(c.snd)}"
    if isinstance(c, If):
        return (f"if {print_pred(c.p)} then {print_cmd(c.c1)} "
                f"else {print_cmd(c.c2)} fi {print_pred(c.q)}")
    if isinstance(c, From):
        return f"from {print_pred(c.p)} do {print_cmd(c.body)} until {print_pred(c.q)}"
    if isinstance(c, Loop):
        raise ValueError("loop re-entry form has no concrete syntax")
    raise TypeError(f"not a command: {c!r}")


def print_program(prog: RintProgram) -> str:
    return print_cmd(prog.body)
