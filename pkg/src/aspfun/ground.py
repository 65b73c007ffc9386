"""Herbrand machinery: term universes, substitutions, matching and instantiation."""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .terms import (
    Arith,
    Atom,
    Func,
    Program,
    ResourceExceeded,
    Rule,
    Term,
    Var,
    evaluate,
    has_arith,
    is_ground,
    rule_key,
    substitute,
    term_key,
)

MAX_TERMS = 10**5
MAX_GROUND_RULES = 10**6


def herbrand_terms(p: Program, depth: int, cap: int = MAX_TERMS) -> set:
    """Ground terms over the constants and function symbols of ``p`` up to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    terms = set(p.constants)
    if len(terms) > cap:
        raise ResourceExceeded(f"more than {cap} terms")
    functions = sorted(p.functions.items())
    for _ in range(depth):
        layer = set()
        pool = sorted(terms, key=term_key)
        for symbol, arity in functions:
            for args in itertools.product(pool, repeat=arity):
                layer.add(Func(symbol, args))
                if len(terms) + len(layer) > cap:
                    raise ResourceExceeded(f"more than {cap} terms")
        if layer <= terms:
            break
        terms |= layer
    return terms


def apply(s: Mapping, e):
    """Apply substitution ``s`` to a rule, atom or term."""
    if isinstance(e, (Rule, Atom)):
        return e.substitute(s)
    return substitute(e, s)


def match_term(pattern: Term, ground: Term, s: dict) -> Optional[dict]:
    """Extend ``s`` so that ``pattern`` under it equals ``ground``; None if impossible."""
    if isinstance(pattern, Var):
        bound = s.get(pattern)
        if bound is None:
            s = dict(s)
            s[pattern] = ground
            return s
        return s if bound == ground else None
    if isinstance(pattern, Func):
        if (not isinstance(ground, Func) or ground.symbol != pattern.symbol
                or len(ground.args) != len(pattern.args)):
            return None
        for pa, ga in zip(pattern.args, ground.args):
            s = match_term(pa, ga, s)
            if s is None:
                return None
        return s
    if isinstance(pattern, Arith):
        value = evaluate(substitute(pattern, s))
        if value is None or not is_ground(value):
            return None
        return s if value == ground else None
    return s if pattern == ground else None


def match_atom(pattern: Atom, ground: Atom, s: dict) -> Optional[dict]:
    if pattern.predicate != ground.predicate or len(pattern.args) != len(ground.args):
        return None
    for pa, ga in zip(pattern.args, ground.args):
        s = match_term(pa, ga, s)
        if s is None:
            return None
    return s


class AtomIndex:
    """A set of ground atoms indexed by predicate and by argument value."""

    __slots__ = ("atoms", "by_pred", "by_arg")

    def __init__(self, atoms: Iterable[Atom] = ()):
        self.atoms: set = set()
        self.by_pred: dict = defaultdict(list)
        self.by_arg: dict = defaultdict(list)
        for a in atoms:
            self.add(a)

    def add(self, a: Atom) -> bool:
        if a in self.atoms:
            return False
        self.atoms.add(a)
        self.by_pred[a.predicate].append(a)
        for i, t in enumerate(a.args):
            self.by_arg[(a.predicate, i, t)].append(a)
        return True

    def __contains__(self, a) -> bool:
        return a in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def candidates(self, pattern: Atom, s: Mapping) -> Sequence:
        for i, t in enumerate(pattern.args):
            if isinstance(t, Var):
                t = s.get(t)
                if t is None:
                    continue
            elif not is_ground(t) or has_arith(t):
                continue
            return self.by_arg.get((pattern.predicate, i, t), ())
        return self.by_pred.get(pattern.predicate, ())


def _ready(a: Atom, s: Mapping) -> bool:
    """An atom with arithmetic can only be matched once its variables are bound."""
    for t in a.args:
        if has_arith(t):
            stack = [t]
            while stack:
                u = stack.pop()
                if isinstance(u, Arith):
                    for v in (u.left, u.right):
                        if isinstance(v, Var) and v not in s:
                            return False
                        stack.append(v)
                elif isinstance(u, Func):
                    stack.extend(u.args)
    return True


def match_atoms(patterns: Sequence[Atom], sources: Sequence, s: dict) -> Iterator[dict]:
    """All extensions of ``s`` mapping every pattern into its source index.

    ``sources[i]`` is an :class:`AtomIndex` or a tuple of them (union).
    """
    if not patterns:
        yield s
        return
    for k, a in enumerate(patterns):
        if _ready(a, s):
            break
    else:
        return
    rest = patterns[:k] + patterns[k + 1:]
    rest_sources = sources[:k] + sources[k + 1:]
    src = sources[k]
    indexes = src if isinstance(src, tuple) else (src,)
    for index in indexes:
        for g in index.candidates(a, s):
            s2 = match_atom(a, g, s)
            if s2 is not None:
                yield from match_atoms(rest, rest_sources, s2)


def builtins_hold(r: Rule, s: Mapping) -> bool:
    return all(c.holds(s) is True for c in r.builtins)


def match_positive_body(r: Rule, i) -> list:
    """Ground substitutions ``s`` over the variables of ``r`` with ``pos(r)s`` in ``i``."""
    index = i if isinstance(i, AtomIndex) else AtomIndex(i)
    out = []
    for s in match_atoms(r.pos, (index,) * len(r.pos), {}):
        if builtins_hold(r, s):
            out.append(s)
    return out


def instantiate(r: Rule, s: Mapping) -> Optional[Rule]:
    """The ground instance ``r s`` with arithmetic evaluated and builtins dropped.

    None when a builtin fails or arithmetic is applied to a non-integer.
    """
    if not builtins_hold(r, s):
        return None
    parts = []
    for group in (r.heads, r.pos, r.neg):
        atoms = []
        for a in group:
            g = a.substitute(s).evaluate()
            if g is None:
                return None
            atoms.append(g)
        parts.append(tuple(atoms))
    head = parts[0][0] if parts[0] else None
    return Rule(head, parts[1], parts[2])


def ground_with_terms(p: Program, terms: Iterable[Term], cap: int = MAX_GROUND_RULES) -> set:
    """Every instance of every rule of ``p`` with variables ranging over ``terms``."""
    pool = sorted(set(terms), key=term_key)
    out: set = set()
    for r in p.rules:
        variables = sorted(r.vars(), key=lambda v: v.name)
        for values in itertools.product(pool, repeat=len(variables)):
            g = instantiate(r, dict(zip(variables, values)))
            if g is not None:
                out.add(g)
                if len(out) > cap:
                    raise ResourceExceeded(f"more than {cap} ground rules")
    return out


def active(p: Program, i) -> set:
    """Ground instances of ``p`` not satisfied by the finite interpretation ``i``."""
    index = i if isinstance(i, AtomIndex) else AtomIndex(i)
    out = set()
    for r in p.rules:
        for s in match_positive_body(r, index):
            g = instantiate(r, s)
            if g is None:
                continue
            if g.head is not None and g.head in index:
                continue
            if any(a in index for a in g.neg):
                continue
            out.add(g)
    return out


def sorted_rules(rules: Iterable[Rule]) -> list:
    return sorted(rules, key=rule_key)


class LevelGrounder:
    """Incrementally instantiate ``p`` against a growing set of atoms.

    ``initial()`` yields the instances with an empty positive body; each call
    to ``extend(delta)`` yields the instances whose positive body lies in the
    accumulated atoms and uses at least one atom of ``delta``.
    """

    def __init__(self, p: Program, cap: int = MAX_GROUND_RULES):
        self.program = p
        self.old = AtomIndex()
        self.cap = cap
        self.count = 0

    def _emit(self, r: Rule, s: dict, out: list) -> None:
        g = instantiate(r, s)
        if g is not None:
            out.append(g)
            self.count += 1
            if self.count > self.cap:
                raise ResourceExceeded(f"more than {self.cap} ground rules")

    def initial(self) -> list:
        out: list = []
        for r in self.program.rules:
            if not r.pos:
                self._emit(r, {}, out)
        return out

    def extend(self, delta: Iterable[Atom]) -> list:
        new = AtomIndex(a for a in delta if a not in self.old)
        out: list = []
        if len(new):
            for r in self.program.rules:
                n = len(r.pos)
                for k in range(n):
                    sources = tuple(
                        self.old if j < k else new if j == k else (self.old, new)
                        for j in range(n)
                    )
                    for s in match_atoms(r.pos, sources, {}):
                        self._emit(r, s, out)
            for a in new:
                self.old.add(a)
        return out
