"""Program generators for tiling systems and Turing machines.

Both encodings come with a direct checker (finite grids, a bounded tape
simulator) so generated programs can be cross-validated.  Tile and state
names become predicate suffixes through a reversible encoding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .syntax import check_safety
from .terms import AspError, Atom, Const, Func, Program, Rule, Var, make_program

BLANK = "B"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "R")


class SpecError(AspError):
    """Malformed tiling-system or machine description."""


# -- name encoding ---------------------------------------------------------------

def encode_name(name: str) -> str:
    """Map an arbitrary name onto ``[a-z0-9_]`` reversibly."""
    out = []
    for ch in name:
        if ch == "_":
            out.append("__")
        elif ch.isascii() and (ch.islower() or ch.isdigit()):
            out.append(ch)
        else:
            out.append(f"_u{ord(ch):x}_")
    return "".join(out)


_ESCAPE = re.compile(r"__|_u([0-9a-f]+)_")


def decode_name(code: str) -> str:
    def repl(m: re.Match) -> str:
        return "_" if m.group(0) == "__" else chr(int(m.group(1), 16))

    return _ESCAPE.sub(repl, code)


# -- tiling systems ----------------------------------------------------------------

@dataclass(frozen=True)
class TilingSystem:
    tiles: tuple
    hi: frozenset
    vi: frozenset
    t0: str

    def __post_init__(self):
        if self.t0 not in self.tiles:
            raise SpecError(f"t0 {self.t0!r} is not a tile")
        for pairs in (self.hi, self.vi):
            for a, b in pairs:
                if a not in self.tiles or b not in self.tiles:
                    raise SpecError(f"pair ({a}, {b}) uses an unknown tile")

    @classmethod
    def make(cls, tiles: Iterable[str], hi: Iterable, vi: Iterable, t0: str) -> "TilingSystem":
        return cls(tuple(dict.fromkeys(tiles)), frozenset(map(tuple, hi)),
                   frozenset(map(tuple, vi)), t0)


@dataclass(frozen=True)
class FiniteGrid:
    width: int
    height: int
    assignment: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for i in range(self.width):
            for j in range(self.height):
                if (i, j) not in self.assignment:
                    raise SpecError(f"grid has no tile at {(i, j)}")

    @classmethod
    def from_rows(cls, rows) -> "FiniteGrid":
        """``rows[j][i]`` is the tile at column ``i`` and row ``j`` (row 0 first)."""
        height = len(rows)
        width = len(rows[0]) if rows else 0
        return cls(width, height, {(i, j): rows[j][i] for j in range(height) for i in range(width)})


def check_grid(t: TilingSystem, g: FiniteGrid) -> bool:
    """No horizontal neighbours in ``hi`` and no vertical neighbours in ``vi``."""
    f = g.assignment
    for i in range(g.width):
        for j in range(g.height):
            if i + 1 < g.width and (f[i, j], f[i + 1, j]) in t.hi:
                return False
            if j + 1 < g.height and (f[i, j], f[i, j + 1]) in t.vi:
                return False
    return True


X, Y = Var("X"), Var("Y")
C0 = Const("c0")


def _s(t):
    return Func("s", (t,))


def tile_pred(t: str) -> str:
    return "tile_" + encode_name(t)


def tiling_to_program(t: TilingSystem) -> Program:
    """Program whose answer sets encode recurring solutions of ``t``."""
    tile = tile_pred
    below = "below_" + encode_name(t.t0)
    rules = [
        Rule(Atom("dom", (C0,))),
        Rule(Atom("dom", (_s(X),)), (Atom("dom", (X,)),)),
    ]
    for a in t.tiles:
        rules.append(Rule(
            Atom(tile(a), (X, Y)),
            (Atom("dom", (X,)), Atom("dom", (Y,))),
            tuple(Atom(tile(b), (X, Y)) for b in t.tiles if b != a),
        ))
    for a, b in sorted(t.hi):
        rules.append(Rule(None, (Atom(tile(a), (X, Y)), Atom(tile(b), (_s(X), Y)))))
    for a, b in sorted(t.vi):
        rules.append(Rule(None, (Atom(tile(a), (X, Y)), Atom(tile(b), (X, _s(Y))))))
    rules += [
        Rule(Atom(below, (Y,)), (Atom(tile(t.t0), (C0, _s(Y))),)),
        Rule(Atom(below, (Y,)), (Atom(below, (_s(Y),)),)),
        Rule(None, (Atom("dom", (Y,)),), (Atom(below, (Y,)),)),
    ]
    check_safety(rules)
    return make_program(rules)


def parse_tiling(text: str) -> TilingSystem:
    """Read ``tiles:``, ``t0:``, ``hi:`` and ``vi:`` lines; pairs are ``a b``
    separated by ``;``.  ``%`` starts a comment."""
    fields = _fields(text, ("tiles", "t0", "hi", "vi"))
    for key in ("tiles", "t0"):
        if key not in fields:
            raise SpecError(f"missing {key!r}")
    tiles = fields["tiles"].split()
    t0 = fields["t0"].strip()
    return TilingSystem.make(tiles, _pairs(fields.get("hi", "")),
                             _pairs(fields.get("vi", "")), t0)


def format_tiling(t: TilingSystem) -> str:
    def pairs(ps):
        return "; ".join(f"{a} {b}" for a, b in sorted(ps))

    return (f"tiles: {' '.join(t.tiles)}\nt0: {t.t0}\n"
            f"hi: {pairs(t.hi)}\nvi: {pairs(t.vi)}\n")


def _pairs(text: str) -> list:
    out = []
    for chunk in text.split(";"):
        parts = chunk.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise SpecError(f"bad pair {chunk.strip()!r}")
        out.append(tuple(parts))
    return out


def _fields(text: str, keys: tuple, block: Optional[str] = None) -> dict:
    out: dict = {}
    lines = []
    in_block = False
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if sep and (key in keys or key == block):
            in_block = key == block
            if in_block:
                if value.strip():
                    lines.append(value.strip())
                continue
            if key in out:
                raise SpecError(f"duplicate {key!r}")
            out[key] = value.strip()
        elif in_block:
            lines.append(line)
        else:
            raise SpecError(f"unexpected line {raw.strip()!r}")
    if block is not None:
        out[block] = lines
    return out


# -- Turing machines ---------------------------------------------------------------

@dataclass(frozen=True)
class TuringMachine:
    """One-way infinite tape; moving left on the first cell stays put."""

    states: tuple
    delta: Mapping
    start: str
    accept: str
    reject: str

    def __post_init__(self):
        if self.accept == self.reject:
            raise SpecError("accept and reject states must differ")
        for q in (self.start, self.accept, self.reject):
            if q not in self.states:
                raise SpecError(f"unknown state {q!r}")
        for q in self.states:
            if q in (self.accept, self.reject):
                continue
            for a in SYMBOLS:
                if (q, a) not in self.delta:
                    raise SpecError(f"delta undefined on ({q}, {a})")
        for (q, a), (r, b, d) in self.delta.items():
            if q in (self.accept, self.reject):
                raise SpecError(f"transition out of final state {q!r}")
            if q not in self.states or r not in self.states:
                raise SpecError(f"unknown state in transition ({q}, {a})")
            if a not in SYMBOLS or b not in SYMBOLS or d not in MOVES:
                raise SpecError(f"bad transition ({q}, {a}) -> ({r}, {b}, {d})")

    @property
    def working(self) -> list:
        return [q for q in self.states if q not in (self.accept, self.reject)]


@dataclass(frozen=True)
class Run:
    halted: bool
    state: str
    steps: int
    tape: tuple
    head: int


def simulate(m: TuringMachine, word: str, max_steps: int = 10**4) -> Run:
    """Run ``m`` on ``word`` for at most ``max_steps`` transitions."""
    _check_word(word)
    tape = list(word)
    q, head, steps = m.start, 0, 0
    while q not in (m.accept, m.reject):
        if steps >= max_steps:
            return Run(False, q, steps, tuple(tape), head)
        while head >= len(tape):
            tape.append(BLANK)
        r, b, d = m.delta[(q, tape[head])]
        tape[head] = b
        head = head + 1 if d == "R" else max(head - 1, 0)
        q = r
        steps += 1
    return Run(True, q, steps, tuple(tape), head)


def _check_word(word: str) -> None:
    if any(ch not in "01" for ch in word):
        raise SpecError(f"input {word!r} is not a binary word")


def state_pred(q: str) -> str:
    return "h_" + encode_name(q)


def symbol_pred(a: str) -> str:
    return "s_" + ("b" if a == BLANK else a)


C = Const("c")


def _r(t):
    return Func("r", (t,))


def _rn(n: int):
    t = C
    for _ in range(n):
        t = _r(t)
    return t


def tm_to_program(m: TuringMachine, fixed_input: Optional[str] = None) -> Program:
    """Program simulating ``m`` on every binary input, or on ``fixed_input``.

    Cells are terms built with ``r`` (next cell to the right) and ``s`` (the
    same cell one step later).
    """
    def A(pred, *args):
        return Atom(pred, tuple(args))

    sX, sY = _s(X), _s(Y)
    step_x = A("step", X, sX)
    rules = [Rule(A(state_pred(m.start), C))]
    if fixed_input is None:
        rules += [
            Rule(A("input", C)),
            Rule(A("right", X, _r(X)), (A("input", X),), (A("last", X),)),
            Rule(A("last", X), (A("input", X),), (A("right", X, _r(X)),)),
            Rule(A("input", _r(X)), (A("input", X), A("right", X, _r(X)))),
            Rule(A("finiteinput"), (A("input", X), A("last", X))),
            Rule(None, (), (A("finiteinput"),)),
            Rule(A("s_b", X), (A("last", X),)),
            Rule(A("s_0", X), (A("input", X),), (A("s_1", X), A("s_b", X))),
            Rule(A("s_1", X), (A("input", X),), (A("s_0", X), A("s_b", X))),
        ]
    else:
        _check_word(fixed_input)
        n = len(fixed_input)
        rules += [Rule(A("input", _rn(i))) for i in range(n + 1)]
        rules += [Rule(A("right", _rn(i), _rn(i + 1))) for i in range(n)]
        rules.append(Rule(A("last", _rn(n))))
        rules += [Rule(A(symbol_pred(w), _rn(i))) for i, w in enumerate(fixed_input)]
        rules.append(Rule(A("s_b", _rn(n))))
        # cells appended during the run still need their blank
        rules.append(Rule(A("s_b", X), (A("last", X),)))
    rules += [
        Rule(A("step", Y, sY), (A("right", X, Y), step_x)),
        Rule(A("step", Y, sY), (A("right", Y, X), step_x)),
        Rule(A("right", sX, sY), (step_x, A("right", X, Y))),
        Rule(A("right", sX, _r(sX)), (step_x, A("last", X))),
        Rule(A("last", _r(sX)), (step_x, A("last", X))),
        Rule(A("halt"), (A(state_pred(m.accept), X),)),
        Rule(A("halt"), (A(state_pred(m.reject), X),)),
        Rule(None, (), (A("halt"),)),
    ]
    for q in m.working:
        rules.append(Rule(step_x, (A(state_pred(q), X),)))
    for a in SYMBOLS:
        rules.append(Rule(
            A(symbol_pred(a), sX),
            (A(symbol_pred(a), X), step_x),
            tuple(A(state_pred(q), X) for q in m.states),
        ))
    for (q, a), (r, b, d) in sorted(m.delta.items()):
        here = (A(state_pred(q), X), A(symbol_pred(a), X))
        rules.append(Rule(A(symbol_pred(b), sX), here))
        if d == "L":
            rules += [
                Rule(A(state_pred(r), Y), (A("right", Y, sX),) + here),
                Rule(A("notfirst", X), (A("right", Y, X),) + here),
                Rule(A(state_pred(r), sX), here, (A("notfirst", X),)),
            ]
        else:
            rules.append(Rule(A(state_pred(r), Y), (A("right", sX, Y),) + here))
    check_safety(rules)
    return make_program(rules)


def parse_tm(text: str) -> TuringMachine:
    """Read ``states:``, ``start:``, ``accept:``, ``reject:`` and a ``delta:``
    block with one ``q a -> r b D`` transition per line."""
    fields = _fields(text, ("states", "start", "accept", "reject"), block="delta")
    for key in ("states", "start", "accept", "reject"):
        if key not in fields:
            raise SpecError(f"missing {key!r}")
    delta = {}
    for line in fields["delta"]:
        m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+(\S+)", line)
        if m is None:
            raise SpecError(f"bad transition {line!r}")
        q, a, r, b, d = m.groups()
        if (q, a) in delta:
            raise SpecError(f"duplicate transition for ({q}, {a})")
        delta[(q, a)] = (r, b, d.upper())
    return TuringMachine(tuple(fields["states"].split()), delta, fields["start"].strip(),
                         fields["accept"].strip(), fields["reject"].strip())


def format_tm(m: TuringMachine) -> str:
    lines = [f"states: {' '.join(m.states)}", f"start: {m.start}",
             f"accept: {m.accept}", f"reject: {m.reject}", "delta:"]
    for (q, a), (r, b, d) in sorted(m.delta.items()):
        lines.append(f"  {q} {a} -> {r} {b} {d}")
    return "\n".join(lines) + "\n"
