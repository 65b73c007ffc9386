"""Surface syntax: parsing, safety, printing and static position analysis.

Grammar (one statement per rule)::

    statement  ::= head "." | head ":-" body "." | ":-" [body] "."
    body       ::= literal ("," literal)*
    literal    ::= atom | "not" atom | term CMP term
    term       ::= simple ("+" simple)*
    simple     ::= ident | Ident | integer | ident "(" term ("," term)* ")"
                 | integer ".." integer        (facts only)

``%`` starts a comment running to the end of the line.  Identifiers starting
with an uppercase letter are variables in term position; in atom position
the first letter of a predicate name is case-insensitive (``Dom`` is ``dom``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator

from .terms import (
    Arith,
    AspError,
    Atom,
    Comparison,
    Const,
    Func,
    Int,
    Program,
    Rule,
    Term,
    Var,
    make_program,
)


class ProgramSyntaxError(AspError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ArityMismatch(AspError):
    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} used with inconsistent arities")
        self.symbol = symbol


class UnsafeRule(AspError):
    def __init__(self, index: int, variable: str):
        super().__init__(f"rule {index}: variable {variable} has no positive body occurrence")
        self.index = index
        self.variable = variable


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<range>\.\.)
  | (?P<cmp><=|>=|!=|<|>|=)
  | (?P<punct>[(),.+])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(slots=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProgramSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


def normalize_name(name: str) -> str:
    return name[0].lower() + name[1:]


@dataclass(frozen=True, slots=True)
class _Interval:
    low: int
    high: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str) -> ProgramSyntaxError:
        return ProgramSyntaxError(message, self.tok.line, self.tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")

    def statements(self) -> Iterator[list]:
        while self.tok.kind != "eof":
            yield self.statement()

    def statement(self) -> list:
        head = None
        if not (self.tok.kind == "if"):
            head = self.literal_atom(allow_interval=True)
        body = []
        if self.accept(":-"):
            # ":- ." is the always-violated constraint some groundings emit
            if head is not None or self.tok.text != ".":
                body.append(self.literal())
                while self.accept(","):
                    body.append(self.literal())
        elif head is None:
            raise self.error("empty statement")
        self.expect(".")
        return self.build(head, body)

    def build(self, head, body) -> list:
        pos, neg, builtins = [], [], []
        for kind, lit in body:
            {"pos": pos, "neg": neg, "cmp": builtins}[kind].append(lit)
        intervals = [] if head is None else [a for a in head.args if isinstance(a, _Interval)]
        if intervals:
            if body:
                raise self.error("intervals are only allowed in facts")
            ranges = [
                [Int(v) for v in range(a.low, a.high + 1)] if isinstance(a, _Interval) else [a]
                for a in head.args
            ]
            return [Rule(Atom(head.predicate, tuple(args))) for args in itertools.product(*ranges)]
        return [Rule(head, tuple(pos), tuple(neg), tuple(builtins))]

    def literal(self) -> tuple:
        if self.tok.kind == "ident" and self.tok.text == "not":
            self.i += 1
            return ("neg", self.literal_atom())
        start = self.i
        left = self.term()
        if self.tok.kind == "cmp":
            op = self.tok.text
            self.i += 1
            return ("cmp", Comparison(op, left, self.term()))
        self.i = start
        return ("pos", self.literal_atom())

    def literal_atom(self, allow_interval: bool = False) -> Atom:
        tok = self.tok
        if tok.kind != "ident" or tok.text == "not":
            raise self.error(f"expected atom, found {tok.text or 'end of input'!r}")
        self.i += 1
        args: tuple = ()
        if self.accept("("):
            args = tuple(self.arguments(allow_interval))
        return Atom(normalize_name(tok.text), args)

    def arguments(self, allow_interval: bool = False) -> list:
        args = [self.term(allow_interval)]
        while self.accept(","):
            args.append(self.term(allow_interval))
        self.expect(")")
        return args

    def term(self, allow_interval: bool = False):
        left = self.simple(allow_interval)
        while self.tok.text == "+":
            if isinstance(left, _Interval):
                raise self.error("arithmetic on an interval")
            self.i += 1
            left = Arith("+", left, self.simple())
        return left

    def simple(self, allow_interval: bool = False):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            if self.tok.kind == "range":
                if not allow_interval:
                    raise self.error("intervals are only allowed in facts")
                self.i += 1
                if self.tok.kind != "int":
                    raise self.error("interval bound must be an integer")
                high = int(self.tok.text)
                self.i += 1
                return _Interval(int(tok.text), high)
            return Int(int(tok.text))
        if tok.kind == "ident" and tok.text != "not":
            self.i += 1
            if self.accept("("):
                return Func(normalize_name(tok.text), tuple(self.arguments()))
            if tok.text[0].isupper() or tok.text[0] == "_":
                return Var(tok.text)
            return Const(tok.text)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error(f"expected term, found {tok.text or 'end of input'!r}")


def bound_vars(rule: Rule) -> set:
    """Variables occurring in a positive body atom outside arithmetic."""
    out = set()

    def visit(t: Term) -> None:
        if isinstance(t, Var):
            out.add(t)
        elif isinstance(t, Func):
            for a in t.args:
                visit(a)

    for a in rule.pos:
        for t in a.args:
            visit(t)
    return out


def check_safety(rules, offset: int = 0) -> None:
    for index, rule in enumerate(rules, offset):
        unsafe = rule.vars() - bound_vars(rule)
        if unsafe:
            raise UnsafeRule(index, min(v.name for v in unsafe))


def parse_program(text: str) -> Program:
    """Parse program text into a safe, desugared :class:`Program`."""
    rules = []
    for stmt in _Parser(text).statements():
        rules.extend(stmt)
    check_safety(rules)
    return make_program(rules)


def parse_atom(text: str) -> Atom:
    parser = _Parser(text)
    atom = parser.literal_atom()
    if parser.tok.kind != "eof":
        raise parser.error("trailing input after atom")
    return atom


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    t = parser.term()
    if parser.tok.kind != "eof":
        raise parser.error("trailing input after term")
    return t


def format_program(p: Program) -> str:
    return "".join(f"{r}\n" for r in p.rules)


# -- static position analysis -------------------------------------------------

@dataclass(frozen=True)
class PositionInfo:
    allows_functional: bool
    constant_pool: frozenset


@dataclass(frozen=True)
class PositionProfile:
    """What may appear at each (predicate, argument index) position; 1-based."""

    positions: dict = field(default_factory=dict)

    def __getitem__(self, key) -> PositionInfo:
        return self.positions.get(key, PositionInfo(False, frozenset()))

    def constants_only(self, key) -> bool:
        return not self[key].allows_functional


_TOP = None  # unconstrained abstract value


def _meet(a, b):
    if a is _TOP:
        return b
    if b is _TOP:
        return a
    return (a[0] & b[0], a[1] and b[1])


def analyze_positions(p: Program) -> PositionProfile:
    """Least fixpoint of argument flow along the positive part of ``p``.

    Negative literals and constraints are ignored, so the result describes a
    superset of every atom that can occur in an answer set.  Arithmetic in a
    head position is treated as open (functional) since it mints new integers.
    """
    values: dict = {}

    def head_value(t: Term, env: dict):
        if isinstance(t, (Const, Int)):
            return (frozenset([t]), False)
        if isinstance(t, Var):
            v = env.get(t, _TOP)
            return (frozenset(), True) if v is _TOP else v
        return (frozenset(), True)

    changed = True
    while changed:
        changed = False
        for r in p.rules:
            if r.head is None:
                continue
            env: dict = {}
            for a in r.pos:
                for i, t in enumerate(a.args, 1):
                    if isinstance(t, Var):
                        cur = values.get((a.predicate, i), (frozenset(), False))
                        env[t] = _meet(env.get(t, _TOP), cur)
            # a body atom with an empty position can never match
            if not all(_derivable(values, a) for a in r.pos):
                continue
            for i, t in enumerate(r.head.args, 1):
                key = (r.head.predicate, i)
                consts, func = head_value(t, env)
                old = values.get(key, (frozenset(), False))
                new = (old[0] | consts, old[1] or func)
                if new != old:
                    values[key] = new
                    changed = True
            if not r.head.args and (r.head.predicate, 0) not in values:
                values[(r.head.predicate, 0)] = (frozenset(), False)
                changed = True
    return PositionProfile(
        {k: PositionInfo(v[1], v[0]) for k, v in values.items() if k[1] > 0}
    )


def _derivable(values: dict, a: Atom) -> bool:
    if not a.args:
        return (a.predicate, 0) in values
    return (a.predicate, 1) in values
