"""Terms, atoms, rules and programs.

Everything here is immutable and hashable so that values can be put in sets,
used as dictionary keys and shared freely between analyses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union


class AspError(Exception):
    """Base class for all errors raised by this package."""


class ResourceExceeded(AspError):
    """A configured cardinality or search budget was exceeded."""


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Int:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Fresh:
    """A constant invented during analysis; never produced by the parser."""

    id: int

    def __str__(self) -> str:
        return f"$c{self.id}"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


class Func:
    """Function application ``symbol(args...)``.

    Immutable; hash, sort key and structural flags are computed once since
    deeply nested terms are hashed and compared constantly.
    """

    __slots__ = ("symbol", "args", "ground", "arith", "fresh", "_hash", "_key")

    def __init__(self, symbol: str, args: tuple):
        args = tuple(args)
        ground, arith, fresh = True, False, False
        for a in args:
            if isinstance(a, Func):
                ground = ground and a.ground
                arith = arith or a.arith
                fresh = fresh or a.fresh
            elif isinstance(a, Var):
                ground = False
            elif isinstance(a, Arith):
                ground = ground and is_ground(a)
                arith = True
            elif isinstance(a, Fresh):
                fresh = True
        init = object.__setattr__
        init(self, "symbol", symbol)
        init(self, "args", args)
        init(self, "ground", ground)
        init(self, "arith", arith)
        init(self, "fresh", fresh)
        init(self, "_hash", hash((Func, symbol, args)))
        init(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Func is immutable")

    def __reduce__(self):
        return (Func, (self.symbol, self.args))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, Func) and self._hash == other._hash
                and self.symbol == other.symbol and self.args == other.args)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Func(symbol={self.symbol!r}, args={self.args!r})"

    def __str__(self) -> str:
        return f"{self.symbol}({','.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class Arith:
    op: str
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


Term = Union[Const, Int, Fresh, Var, Func, Arith]

CONSTANT_TYPES = (Const, Int, Fresh)


def term_key(t: Term) -> tuple:
    """Sort key: constants < integers < fresh constants < functional terms.

    Keys are flat preorder encodings; since every tag fixes how many fields
    follow, comparing them equals comparing the nested structures.
    """
    if isinstance(t, Const):
        return (0, t.name)
    if isinstance(t, Int):
        return (1, t.value)
    if isinstance(t, Fresh):
        return (2, t.id)
    if isinstance(t, Func):
        k = t._key
        if k is None:
            k = (3, t.symbol, len(t.args)) + tuple(
                x for a in t.args for x in term_key(a))
            object.__setattr__(t, "_key", k)
        return k
    if isinstance(t, Var):
        return (4, t.name)
    return (5, t.op) + term_key(t.left) + term_key(t.right)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, Func):
        return t.ground
    if isinstance(t, Arith):
        return is_ground(t.left) and is_ground(t.right)
    return True


def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Func) and not t.ground:
        for a in t.args:
            yield from term_vars(a)
    elif isinstance(t, Arith):
        yield from term_vars(t.left)
        yield from term_vars(t.right)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Func):
        for a in t.args:
            yield from subterms(a)
    elif isinstance(t, Arith):
        yield from subterms(t.left)
        yield from subterms(t.right)


def depth(t: Term) -> int:
    """Nesting depth of function symbols; constants have depth 0."""
    if isinstance(t, Func):
        return 1 + max(depth(a) for a in t.args)
    return 0


def has_fresh(t: Term) -> bool:
    if isinstance(t, Fresh):
        return True
    if isinstance(t, Func):
        return t.fresh
    return False


def substitute(t: Term, s: Mapping) -> Term:
    """Replace every mapped variable (or fresh constant) in ``t``."""
    if isinstance(t, (Var, Fresh)):
        return s.get(t, t)
    if isinstance(t, Func):
        if t.ground and not t.fresh:
            return t
        return Func(t.symbol, tuple(substitute(a, s) for a in t.args))
    if isinstance(t, Arith):
        return Arith(t.op, substitute(t.left, s), substitute(t.right, s))
    return t


def evaluate(t: Term) -> Optional[Term]:
    """Evaluate arithmetic inside a ground term.

    Returns None when an arithmetic operand is not an integer, in which case
    the instance containing ``t`` does not exist.
    """
    if isinstance(t, Arith):
        left, right = evaluate(t.left), evaluate(t.right)
        if not isinstance(left, Int) or not isinstance(right, Int):
            return None
        return Int(left.value + right.value)
    if isinstance(t, Func):
        if not t.arith:
            return t
        args = []
        for a in t.args:
            v = evaluate(a)
            if v is None:
                return None
            args.append(v)
        return Func(t.symbol, tuple(args))
    return t


def has_arith(t: Term) -> bool:
    if isinstance(t, Arith):
        return True
    if isinstance(t, Func):
        return t.arith
    return False


class Atom:
    """``predicate(args...)``; immutable, with a cached hash."""

    __slots__ = ("predicate", "args", "_hash", "_key")

    def __init__(self, predicate: str, args: tuple = ()):
        args = tuple(args)
        init = object.__setattr__
        init(self, "predicate", predicate)
        init(self, "args", args)
        init(self, "_hash", hash((Atom, predicate, args)))
        init(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Atom is immutable")

    def __reduce__(self):
        return (Atom, (self.predicate, self.args))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, Atom) and self._hash == other._hash
                and self.predicate == other.predicate and self.args == other.args)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Atom(predicate={self.predicate!r}, args={self.args!r})"

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return all(is_ground(a) for a in self.args)

    def vars(self) -> Iterator[Var]:
        for a in self.args:
            yield from term_vars(a)

    def substitute(self, s: Mapping) -> "Atom":
        return Atom(self.predicate, tuple(substitute(a, s) for a in self.args))

    def evaluate(self) -> Optional["Atom"]:
        if not any(has_arith(a) for a in self.args):
            return self
        args = []
        for a in self.args:
            v = evaluate(a)
            if v is None:
                return None
            args.append(v)
        return Atom(self.predicate, tuple(args))


def atom_key(a: Atom) -> tuple:
    k = a._key
    if k is None:
        k = (a.predicate, len(a.args)) + tuple(x for t in a.args for x in term_key(t))
        object.__setattr__(a, "_key", k)
    return k


def sorted_atoms(atoms: Iterable[Atom]) -> list:
    return sorted(atoms, key=atom_key)


def format_atoms(atoms: Iterable[Atom]) -> str:
    return "{" + ", ".join(map(str, sorted_atoms(atoms))) + "}"


COMPARISON_OPS = ("<", "<=", ">", ">=", "=", "!=")


@dataclass(frozen=True, slots=True)
class Comparison:
    """Builtin comparison literal; evaluated at grounding, never stored."""

    op: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"

    def vars(self) -> Iterator[Var]:
        yield from term_vars(self.left)
        yield from term_vars(self.right)

    def substitute(self, s: Mapping) -> "Comparison":
        return Comparison(self.op, substitute(self.left, s), substitute(self.right, s))

    def holds(self, s: Mapping = {}) -> Optional[bool]:
        """Truth value under ``s``; None if undecidable (fresh constants, unbound)."""
        left = evaluate(substitute(self.left, s))
        right = evaluate(substitute(self.right, s))
        if left is None or right is None:
            return False
        if not (is_ground(left) and is_ground(right)):
            return None
        if has_fresh(left) or has_fresh(right):
            if self.op in ("=", "!=") and left == right:
                return self.op == "="
            return None
        if self.op == "=":
            return left == right
        if self.op == "!=":
            return left != right
        lk, rk = term_key(left), term_key(right)
        if self.op == "<":
            return lk < rk
        if self.op == "<=":
            return lk <= rk
        if self.op == ">":
            return lk > rk
        return lk >= rk


@dataclass(frozen=True, slots=True)
class Rule:
    """A normal rule ``head :- pos, not neg, builtins``; constraint if head is None.

    Ground rules use the same class with variable-free atoms and no builtins.
    """

    head: Optional[Atom]
    pos: tuple = ()
    neg: tuple = ()
    builtins: tuple = ()

    def __str__(self) -> str:
        body = [str(a) for a in self.pos]
        body += [f"not {a}" for a in self.neg]
        body += [str(c) for c in self.builtins]
        if self.head is None:
            return ":- " + ", ".join(body) + "."
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(body)}."

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def heads(self) -> tuple:
        return () if self.head is None else (self.head,)

    def vars(self) -> set:
        out = set()
        for a in self.heads + self.pos + self.neg:
            out.update(a.vars())
        for c in self.builtins:
            out.update(c.vars())
        return out

    def head_vars(self) -> set:
        return set(self.head.vars()) if self.head is not None else set()

    def is_ground(self) -> bool:
        return not self.vars()

    def substitute(self, s: Mapping) -> "Rule":
        return Rule(
            None if self.head is None else self.head.substitute(s),
            tuple(a.substitute(s) for a in self.pos),
            tuple(a.substitute(s) for a in self.neg),
            tuple(c.substitute(s) for c in self.builtins),
        )


def rule_key(r: Rule) -> tuple:
    head = () if r.head is None else atom_key(r.head)
    return (
        head,
        tuple(atom_key(a) for a in r.pos),
        tuple(atom_key(a) for a in r.neg),
    )


@dataclass(frozen=True)
class Program:
    rules: tuple
    predicates: Mapping = field(default_factory=dict, compare=False)
    functions: Mapping = field(default_factory=dict, compare=False)
    constants: frozenset = frozenset()

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    @property
    def facts(self) -> list:
        return [r for r in self.rules if r.head is not None and not r.pos and not r.neg
                and not r.builtins and r.head.is_ground()]

    def ground_terms(self) -> set:
        """All variable-free terms (and their subterms) occurring in the rules."""
        out = set()
        for r in self.rules:
            atoms = r.heads + r.pos + r.neg
            for a in atoms:
                for t in a.args:
                    for s in subterms(t):
                        if is_ground(s) and not isinstance(s, Arith) and not has_arith(s):
                            out.add(s)
        return out


def program_signature(rules: Iterable[Rule]) -> tuple:
    """Collect (predicates, functions, constants), raising on arity clashes."""
    from .syntax import ArityMismatch  # local: syntax imports this module

    preds: dict = {}
    funcs: dict = {}
    consts: set = set()

    def visit(t: Term) -> None:
        if isinstance(t, (Const, Int)):
            consts.add(t)
        elif isinstance(t, Func):
            if funcs.setdefault(t.symbol, len(t.args)) != len(t.args):
                raise ArityMismatch(t.symbol)
            for a in t.args:
                visit(a)
        elif isinstance(t, Arith):
            visit(t.left)
            visit(t.right)

    for r in rules:
        for a in r.heads + r.pos + r.neg:
            if preds.setdefault(a.predicate, len(a.args)) != len(a.args):
                raise ArityMismatch(a.predicate)
            for t in a.args:
                visit(t)
        for c in r.builtins:
            visit(c.left)
            visit(c.right)
    return preds, funcs, frozenset(consts)


def make_program(rules: Iterable[Rule]) -> Program:
    rules = tuple(rules)
    preds, funcs, consts = program_signature(rules)
    return Program(rules, preds, funcs, consts)
