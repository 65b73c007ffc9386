"""Forbidden atoms: signed closures, support, r-extensions and IsForbidden.

An atom is forbidden when it occurs in no answer set.  Deciding this is
impossible in general; :func:`is_forbidden` is a sound but incomplete test
that backtracks over the ways an atom could be proven, carrying a pair of
atom sets that must be true (``pos``) and must be false (``neg``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .ground import AtomIndex, instantiate, match_atom, match_atoms
from .syntax import PositionProfile, analyze_positions
from .terms import (
    CONSTANT_TYPES,
    Arith,
    Atom,
    Fresh,
    Func,
    Int,
    Program,
    Rule,
    Term,
    Var,
    atom_key,
    evaluate,
    format_atoms,
    has_arith,
    has_fresh,
    is_ground,
    subterms,
    substitute,
    term_key,
)

DEFAULT_MAX_DEPTH = 32
DEFAULT_MAX_CALLS = 10**4
MAX_COMPLETIONS = 10**5


@dataclass(frozen=True)
class SignedPair:
    """Atoms that must be true (``pos``) and atoms that must be false (``neg``)."""

    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    @classmethod
    def of(cls, pos: Iterable[Atom] = (), neg: Iterable[Atom] = ()) -> "SignedPair":
        return cls(frozenset(pos), frozenset(neg))

    def __str__(self) -> str:
        return f"+{format_atoms(self.pos)} -{format_atoms(self.neg)}"


def terms_of(atoms: Iterable[Atom]) -> set:
    """All subterms of arguments of ``atoms``."""
    out = set()
    for a in atoms:
        for t in a.args:
            out.update(subterms(t))
    return out


class TermUniverse:
    """Membership test for the term-atoms of a program relative to a set ``L``.

    An atom qualifies when its predicate belongs to the program (with the
    right arity) and every argument is a constant of any kind, a ground term
    of the program, or a term of ``L``.
    """

    def __init__(self, predicates: Mapping, program_terms: Iterable[Term],
                 l_terms: Iterable[Term]):
        self.predicates = dict(predicates)
        self.program_terms = frozenset(program_terms)
        self.l_terms = frozenset(l_terms)

    @classmethod
    def for_atoms(cls, p: Program, atoms: Iterable[Atom]) -> "TermUniverse":
        return cls(p.predicates, _program_terms(p), terms_of(atoms))

    def contains_term(self, t: Term) -> bool:
        return (isinstance(t, CONSTANT_TYPES) or t in self.program_terms
                or t in self.l_terms)

    def ta_contains(self, a: Atom) -> bool:
        return (self.predicates.get(a.predicate) == len(a.args)
                and all(self.contains_term(t) for t in a.args))

    __contains__ = ta_contains

    def pool(self) -> list:
        """The finitely many terms named by the universe, in term order.

        Constants outside the program and ``L`` are not listed: the universe
        admits them, but none of them can occur in any finite set under study.
        """
        return sorted(self.program_terms | self.l_terms, key=term_key)


_TERMS_CACHE: dict = {}


def _program_terms(p: Program) -> frozenset:
    key = id(p)
    hit = _TERMS_CACHE.get(key)
    if hit is None or hit[0] is not p:
        hit = (p, frozenset(p.ground_terms()))
        _TERMS_CACHE[key] = hit
    return hit[1]


# -- one-rule inferences -------------------------------------------------------

def _index(atoms) -> AtomIndex:
    return atoms if isinstance(atoms, AtomIndex) else AtomIndex(atoms)


def r_plus(r: Rule, lp, ln) -> set:
    """Forward inferences of ``r`` from true atoms ``lp`` and false atoms ``ln``.

    Heads of instances whose positive body is true and negative body false;
    and, for a single negative literal, that literal's atom whenever the
    positive body is true and the head is false (or absent).
    """
    lp, ln = _index(lp), _index(ln)
    out = set()
    for s in match_atoms(r.pos, (lp,) * len(r.pos), {}):
        g = instantiate(r, s)
        if g is None:
            continue
        if g.head is not None and all(a in ln for a in g.neg):
            out.add(g.head)
        if len(g.neg) == 1 and (g.head is None or g.head in ln):
            out.add(g.neg[0])
    return out


def r_minus(r: Rule, lp, ln, universe: TermUniverse) -> set:
    """Backward inference of ``r``: the single positive body atom must be false
    whenever the head and the negative body are false.

    Variables not fixed by matching the head and negative body into ``ln``
    range over the terms of ``universe``.
    """
    if len(r.pos) != 1:
        return set()
    ln = _index(ln)
    patterns = [a for a in r.heads + r.neg if not any(has_arith(t) for t in a.args)]
    variables = sorted(r.vars(), key=lambda v: v.name)
    out = set()
    pool = None
    for s in match_atoms(patterns, (ln,) * len(patterns), {}):
        free = [v for v in variables if v not in s]
        if free:
            if pool is None:
                pool = universe.pool()
            if len(pool) ** len(free) > MAX_COMPLETIONS:
                continue
            completions = ({**s, **dict(zip(free, vals))}
                           for vals in itertools.product(pool, repeat=len(free)))
        else:
            completions = (s,)
        for s2 in completions:
            g = instantiate(r, s2)
            if g is None:
                continue
            if all(a in ln for a in g.heads) and all(a in ln for a in g.neg):
                out.add(g.pos[0])
    return out


# -- closure -------------------------------------------------------------------

class _Closure:
    """Stage-by-stage signed closure recording when each atom appeared.

    Evaluation is semi-naive: each round matches rule bodies only against
    atoms added in the previous round and re-checks the instances that
    matched earlier but still wait for atoms to become false.  The rounds
    coincide with those of the naive recurrence over :func:`r_plus` and
    :func:`r_minus`.  Heads proven by some instance are collected in
    ``supported`` on the way.
    """

    def __init__(self, p: Program, s: SignedPair, cache: Optional[dict] = None):
        self.program = p
        self.universe = TermUniverse.for_atoms(p, s.pos | s.neg)
        self.pos = AtomIndex(s.pos)
        self.neg = AtomIndex(s.neg)
        self.stages: list = []
        self.supported: set = set()
        # (rule index, values) -> ground instance, shareable across closures
        self.cache = {} if cache is None else cache

    def _instance(self, k: int, r: Rule, variables: tuple, s: dict):
        key = (k, tuple(s[v] for v in variables))
        hit = self.cache.get(key, self)
        if hit is self:
            hit = self.cache[key] = instantiate(r, s)
        return hit

    def run(self, stamp: Optional[Callable[[], int]] = None, stamps: Optional[dict] = None):
        ta = self.universe.ta_contains
        rules = self.program.rules
        variables = [tuple(sorted(r.vars(), key=lambda v: v.name)) for r in rules]
        minus_rules = [k for k, r in enumerate(rules) if len(r.pos) == 1]
        minus_patterns = [[a for a in r.heads + r.neg if not any(has_arith(t) for t in a.args)]
                          for r in map(rules.__getitem__, minus_rules)]
        plus_pending: list = []
        minus_pending: list = []
        seen_plus: set = set()
        seen_minus: set = set()
        pos_old, neg_old = AtomIndex(), AtomIndex()
        pos_new, neg_new = AtomIndex(self.pos.atoms), AtomIndex(self.neg.atoms)
        first = True
        while True:
            for k, r in enumerate(rules):
                for s in _delta_matches(r.pos, pos_old, pos_new, first):
                    g = self._instance(k, r, variables[k], s)
                    if g is not None and g not in seen_plus:
                        seen_plus.add(g)
                        plus_pending.append(g)
            for k, pats in zip(minus_rules, minus_patterns):
                for s in _delta_matches(pats, neg_old, neg_new, first):
                    for g in self._complete(k, rules[k], variables[k], s):
                        if g not in seen_minus:
                            seen_minus.add(g)
                            minus_pending.append(g)
            first = False
            add_pos, add_neg = set(), set()
            plus_pending = [g for g in plus_pending if self._fire_plus(g, add_pos, ta)]
            minus_pending = [g for g in minus_pending if self._fire_minus(g, add_neg, ta)]
            add_pos -= self.pos.atoms
            add_neg -= self.neg.atoms
            if not add_pos and not add_neg:
                return
            self.stages.append((frozenset(add_pos), frozenset(add_neg)))
            if stamps is not None:
                k = stamp()
                for a in add_pos:
                    stamps.setdefault(("+", a), k)
                for a in add_neg:
                    stamps.setdefault(("-", a), k)
            for a in pos_new:
                pos_old.add(a)
            for a in neg_new:
                neg_old.add(a)
            pos_new, neg_new = AtomIndex(add_pos), AtomIndex(add_neg)
            for a in add_pos:
                self.pos.add(a)
            for a in add_neg:
                self.neg.add(a)

    def _fire_plus(self, g: Rule, out: set, ta) -> bool:
        """Apply both forward clauses to ``g``; False once it can add nothing more."""
        ln = self.neg.atoms
        waiting = False
        if g.head is not None:
            if all(a in ln for a in g.neg):
                self.supported.add(g.head)
                if ta(g.head):
                    out.add(g.head)
            else:
                waiting = True
        if len(g.neg) == 1:
            if g.head is None or g.head in ln:
                if ta(g.neg[0]):
                    out.add(g.neg[0])
            else:
                waiting = True
        return waiting

    def _fire_minus(self, g: Rule, out: set, ta) -> bool:
        ln = self.neg.atoms
        if all(a in ln for a in g.heads) and all(a in ln for a in g.neg):
            if ta(g.pos[0]):
                out.add(g.pos[0])
            return False
        return True

    def _complete(self, k: int, r: Rule, variables: tuple, s: dict):
        free = [v for v in variables if v not in s]
        if free:
            pool = self.universe.pool()
            if len(pool) ** len(free) > MAX_COMPLETIONS:
                return
            for vals in itertools.product(pool, repeat=len(free)):
                g = self._instance(k, r, variables, {**s, **dict(zip(free, vals))})
                if g is not None:
                    yield g
        else:
            g = self._instance(k, r, variables, s)
            if g is not None:
                yield g

    def result(self) -> SignedPair:
        return SignedPair(frozenset(self.pos.atoms), frozenset(self.neg.atoms))


def _delta_matches(patterns, old: AtomIndex, new: AtomIndex, first: bool):
    """Matches of ``patterns`` into ``old | new`` that use at least one atom
    of ``new``; with ``first`` set, every match (including the empty one)."""
    if not patterns:
        if first:
            yield {}
        return
    both = (old, new)
    n = len(patterns)
    for j in range(n):
        sources = (old,) * j + (new,) + (both,) * (n - j - 1)
        yield from match_atoms(patterns, sources, {})


def closure_stages(p: Program, s: SignedPair) -> list:
    """The successive stages of the signed closure, starting with ``s`` itself."""
    c = _Closure(p, s)
    c.run()
    out = [s]
    pos, neg = set(s.pos), set(s.neg)
    for add_pos, add_neg in c.stages:
        pos |= add_pos
        neg |= add_neg
        out.append(SignedPair(frozenset(pos), frozenset(neg)))
    return out


def signed_closure(p: Program, s: SignedPair) -> SignedPair:
    """Least fixpoint of the simultaneous forward/backward inference recurrence.

    Every step is filtered through the term-atoms of the *input* pair, so the
    result is finite.
    """
    c = _Closure(p, s)
    c.run()
    return c.result()


def has_support(a: Atom, p: Program, s: SignedPair) -> bool:
    """Some rule instance derives ``a`` from ``s.pos`` while its negative body
    lies in ``s.neg``."""
    lp = _index(s.pos)
    return _supported(a, p, lp, s.neg)


def _supported(a: Atom, p: Program, lp: AtomIndex, neg) -> bool:
    for r in p.rules:
        if r.head is None or r.head.predicate != a.predicate or len(r.head.args) != len(a.args):
            continue
        seed = {} if any(has_arith(t) for t in r.head.args) else match_atom(r.head, a, {})
        if seed is None:
            continue
        for s in match_atoms(r.pos, (lp,) * len(r.pos), seed):
            g = instantiate(r, s)
            if g is not None and g.head == a and all(b in neg for b in g.neg):
                return True
    return False


# -- r-extensions ----------------------------------------------------------------

class FreshSupply:
    """Source of fresh constants, unique within one analysis session."""

    def __init__(self, start: int = 0):
        self._next = start

    def __call__(self) -> Fresh:
        c = Fresh(self._next)
        self._next += 1
        return c

    @property
    def issued(self) -> int:
        return self._next


def body_only_vars(r: Rule) -> list:
    head = r.head_vars()
    seen = set()
    for a in r.pos:
        for v in a.vars():
            if v not in head:
                seen.add(v)
    return sorted(seen, key=lambda v: v.name)


def extension_domains(r: Rule, profile: PositionProfile) -> dict:
    """For each body-only variable: a sorted constant list, or None for fresh.

    A variable is confined to constants as soon as one of its direct argument
    positions in the positive body can only hold constants; several such
    positions intersect their pools.
    """
    out = {}
    for v in body_only_vars(r):
        pool = None
        for a in r.pos:
            for i, t in enumerate(a.args, 1):
                if t == v and profile.constants_only((a.predicate, i)):
                    consts = profile[(a.predicate, i)].constant_pool
                    pool = consts if pool is None else pool & consts
        out[v] = None if pool is None else sorted(pool, key=term_key)
    return out


def r_extensions(r: Rule, sigma: Mapping, profile: PositionProfile,
                 fresh: Optional[FreshSupply] = None) -> list:
    """All r-extensions of ``sigma``, in lexicographic order of the pools."""
    domains = extension_domains(r, profile)
    fresh = fresh or FreshSupply(_next_fresh(sigma.values()))
    fixed = dict(sigma)
    varying = []
    for v, pool in domains.items():
        if pool is None:
            fixed[v] = fresh()
        else:
            varying.append((v, pool))
    out = []
    for values in itertools.product(*(pool for _, pool in varying)):
        s = dict(fixed)
        s.update(zip((v for v, _ in varying), values))
        out.append(s)
    return out


def _next_fresh(terms: Iterable[Term]) -> int:
    top = -1
    for t in terms:
        for u in subterms(t):
            if isinstance(u, Fresh):
                top = max(top, u.id)
    return top + 1


# -- unification for line 7 ------------------------------------------------------

class _Open(Exception):
    """Unification reached a case it cannot decide exactly."""


def _walk(t: Term, s: dict) -> Term:
    while isinstance(t, (Var, Fresh)) and t in s:
        t = s[t]
    return t


def _resolve(t: Term, s: dict) -> Term:
    t = _walk(t, s)
    if isinstance(t, Func):
        return Func(t.symbol, tuple(_resolve(a, s) for a in t.args))
    if isinstance(t, Arith):
        return Arith(t.op, _resolve(t.left, s), _resolve(t.right, s))
    return t


def _occurs(x: Term, t: Term, s: dict) -> bool:
    t = _walk(t, s)
    if t == x:
        return True
    if isinstance(t, Func):
        return any(_occurs(x, a, s) for a in t.args)
    if isinstance(t, Arith):
        return _occurs(x, t.left, s) or _occurs(x, t.right, s)
    return False


def _unify(a: Term, b: Term, s: dict) -> bool:
    """Most general unifier where rule variables and fresh constants both act
    as variables; extends ``s`` in place.  Raises :class:`_Open` when
    arithmetic prevents an exact answer."""
    a, b = _walk(a, s), _walk(b, s)
    if a == b:
        return True
    for x, y in ((a, b), (b, a)):
        if isinstance(x, (Var, Fresh)):
            if _occurs(x, y, s):
                return False
            s[x] = y
            return True
    if isinstance(a, Arith) or isinstance(b, Arith):
        expr, other = (a, b) if isinstance(a, Arith) else (b, a)
        return _unify_arith(expr, other, s)
    if isinstance(a, Func) and isinstance(b, Func):
        if a.symbol != b.symbol or len(a.args) != len(b.args):
            return False
        return all(_unify(x, y, s) for x, y in zip(a.args, b.args))
    return False


def _unify_arith(expr: Arith, other: Term, s: dict) -> bool:
    if not isinstance(other, (Int, Arith)):
        if isinstance(other, CONSTANT_TYPES) or isinstance(other, Func):
            return False
        raise _Open
    left, right = _walk(expr.left, s), _walk(expr.right, s)
    if isinstance(other, Int):
        if isinstance(left, Int) and isinstance(right, Int):
            return left.value + right.value == other.value
        if isinstance(right, Int) and isinstance(left, (Var, Fresh)):
            s[left] = Int(other.value - right.value)
            return True
        if isinstance(left, Int) and isinstance(right, (Var, Fresh)):
            s[right] = Int(other.value - left.value)
            return True
    raise _Open


@dataclass
class HeadMatch:
    """One way of proving ``g(a)``: rule index, head substitution and ``g``."""

    index: int
    rule: Rule
    sigma: dict
    g: dict


def head_matches(p: Program, a: Atom) -> Iterator:
    """Yield a :class:`HeadMatch` per rule whose head unifies with ``a``.

    Yields None for a rule where some fresh constant of ``a`` could stand for a
    term that is not a fixed variable-free term; the caller treats this as
    an escape.
    """
    freshes = {u for t in a.args for u in subterms(t) if isinstance(u, Fresh)}
    for k, r in enumerate(p.rules):
        h = r.head
        if h is None or h.predicate != a.predicate or len(h.args) != len(a.args):
            continue
        s: dict = {}
        try:
            if not all(_unify(x, y, s) for x, y in zip(h.args, a.args)):
                continue
        except _Open:
            yield None
            continue
        g = {}
        escaped = False
        for c in sorted(freshes, key=term_key):
            t = _resolve(c, s)
            if not is_ground(t) or has_fresh(t) or has_arith(t):
                escaped = True
                break
            if t != c:
                g[c] = t
        if escaped:
            yield None
            continue
        sigma = {}
        for v in sorted(r.head_vars(), key=lambda v: v.name):
            t = substitute(_resolve(v, s), g)
            if has_arith(t):
                t2 = _eval_or_none(t)
                if t2 is None:
                    yield None
                    break
                t = t2
            sigma[v] = t
        else:
            if h.substitute(sigma).evaluate() == a.substitute(g):
                yield HeadMatch(k, r, sigma, g)


def _eval_or_none(t: Term) -> Optional[Term]:
    if not is_ground(t):
        return None
    return evaluate(t)


# -- IsForbidden -----------------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenBudget:
    max_depth: int = DEFAULT_MAX_DEPTH
    max_calls: int = DEFAULT_MAX_CALLS


@dataclass(frozen=True)
class TraceEvent:
    depth: int
    line: int
    event: str
    data: tuple = ()

    def __str__(self) -> str:
        return f"DEPTH {self.depth} | LINE {self.line} | {self.event}"


@dataclass
class ForbiddenResult:
    verdict: bool
    calls: int
    exhausted: bool
    trace: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verdict


def format_subst(s: Mapping) -> str:
    if not s:
        return "id"
    items = sorted(s.items(), key=lambda kv: term_key(kv[0]))
    return "[" + ", ".join(f"{k}/{v}" for k, v in items) + "]"


class _Session:
    def __init__(self, p: Program, budget: ForbiddenBudget, trace: bool,
                 profile: Optional[PositionProfile] = None, instances: Optional[dict] = None):
        self.program = p
        self.profile = profile if profile is not None else analyze_positions(p)
        self.budget = budget
        self.fresh = FreshSupply()
        self.calls = 0
        self.exhausted = False
        self.tracing = trace
        self.trace: list = []
        self._clock = itertools.count()
        self.instances: dict = {} if instances is None else instances

    def emit(self, depth: int, line: int, event: str, *data) -> None:
        if self.tracing:
            self.trace.append(TraceEvent(depth, line, event, tuple(data)))

    def stamp(self) -> int:
        return next(self._clock)

    def run(self, pos: frozenset, neg: frozenset, stamps: dict, depth: int) -> bool:
        """One call of the algorithm on ``(pos, neg)``; ``stamps`` maps signed
        atoms to their insertion time."""
        self.calls += 1
        if depth > self.budget.max_depth or self.calls > self.budget.max_calls:
            self.exhausted = True
            self.emit(depth, 0, "budget exhausted; return false")
            return False
        p = self.program
        stamps = dict(stamps)
        closure = _Closure(p, SignedPair(pos, neg), self.instances)
        closure.run(self.stamp, stamps)
        lp, ln = closure.pos, closure.neg
        self.emit(depth, 1, f"closure pos = {format_atoms(lp)} neg = {format_atoms(ln)}",
                  frozenset(lp.atoms), frozenset(ln.atoms))
        clash = lp.atoms & ln.atoms
        if clash:
            self.emit(depth, 3, f"return true: {format_atoms(clash)} in pos and neg",
                      frozenset(clash))
            return True
        unsupported = [a for a in lp.atoms if a not in closure.supported]
        unsupported.sort(key=lambda a: (a not in pos, -stamps.get(("+", a), 0), atom_key(a)))
        l_terms = terms_of(lp.atoms) | terms_of(ln.atoms)
        some = False
        for a in unsupported:
            self.emit(depth, 5, f"pick {a}", a)
            a_frbdn = True
            for m in head_matches(p, a):
                if m is None:
                    self.emit(depth, 8, f"{a} may be proven with arbitrary terms; aFrbdn = false")
                    a_frbdn = False
                    break
                ga = a.substitute(m.g)
                self.emit(depth, 7, f"rule {m.index}: {m.rule} sigma = {format_subst(m.sigma)} "
                          f"g = {format_subst(m.g)}", m.index, dict(m.sigma), dict(m.g))
                if not terms_of([ga]) <= l_terms:
                    self.emit(depth, 8, f"{ga} features new terms; aFrbdn = false")
                    a_frbdn = False
                    break
                k_pos, k_neg, k_stamps = _rewrite(lp.atoms, ln.atoms, stamps, m.g)
                if m.g:
                    self.emit(depth, 12, f"K+ = {format_atoms(k_pos)} K- = {format_atoms(k_neg)}")
                ta = TermUniverse.for_atoms(p, k_pos | k_neg)
                for ext in r_extensions(m.rule, m.sigma, self.profile, self.fresh):
                    g = instantiate_partial(m.rule, ext)
                    if g is None:
                        continue
                    new_pos = {b for b in g.pos if b in ta} - k_pos
                    new_neg = {b for b in g.neg if b in ta} - k_neg
                    self.emit(depth, 13, f"extension {format_subst(ext)}: J+ adds "
                              f"{format_atoms(new_pos)} J- adds {format_atoms(new_neg)}",
                              dict(ext), frozenset(new_pos), frozenset(new_neg))
                    j_stamps = dict(k_stamps)
                    k = self.stamp()
                    for b in new_pos:
                        j_stamps[("+", b)] = k
                    for b in new_neg:
                        j_stamps[("-", b)] = k
                    sub = self.run(k_pos | new_pos, k_neg | new_neg, j_stamps, depth + 1)
                    a_frbdn = a_frbdn and sub
                    if not a_frbdn:
                        break
                if not a_frbdn:
                    break
            self.emit(depth, 16, f"aFrbdn({a}) = {str(a_frbdn).lower()}", a, a_frbdn)
            if a_frbdn:
                some = True
                break
        self.emit(depth, 18, f"return {str(some).lower()}", some)
        return some


def instantiate_partial(r: Rule, s: Mapping) -> Optional[Rule]:
    """Instantiate ``r`` where fresh constants may block builtins or arithmetic.

    A builtin that is definitely false drops the instance; an undecidable one
    is kept.  Body atoms whose arithmetic cannot be evaluated are omitted.
    """
    for c in r.builtins:
        if c.holds(s) is False:
            return None
    parts = []
    for group in (r.pos, r.neg):
        atoms = []
        for a in group:
            g = a.substitute(s)
            if not g.is_ground():
                continue
            e = g.evaluate()
            if e is not None and not any(has_arith(t) for t in e.args):
                atoms.append(e)
        parts.append(tuple(atoms))
    head = r.head.substitute(s).evaluate() if r.head is not None else None
    return Rule(head, parts[0], parts[1])


def _rewrite(pos, neg, stamps: dict, g: Mapping):
    if not g:
        return frozenset(pos), frozenset(neg), dict(stamps)
    new_stamps: dict = {}
    out = []
    for sign, atoms in (("+", pos), ("-", neg)):
        rewritten = set()
        for a in atoms:
            b = a.substitute(g)
            rewritten.add(b)
            k = stamps.get((sign, a))
            if k is not None:
                old = new_stamps.get((sign, b))
                new_stamps[(sign, b)] = k if old is None else min(old, k)
        out.append(frozenset(rewritten))
    return out[0], out[1], new_stamps


def is_forbidden(p: Program, s: SignedPair, budget: Optional[ForbiddenBudget] = None,
                 trace: bool = False, profile: Optional[PositionProfile] = None,
                 instances: Optional[dict] = None):
    """Run the backtracking forbidden-atom test on ``s``.

    A true verdict means some atom of ``s.pos`` occurs in no answer set of
    ``p`` (or ``s`` is contradictory).  Returns a :class:`ForbiddenResult`,
    which is truthy exactly when the verdict is true.  Running out of budget
    anywhere only turns the affected branch false.  ``instances`` may carry
    a ground-instance cache between queries on the same program.
    """
    session = _Session(p, budget or ForbiddenBudget(), trace, profile, instances)
    k = session.stamp()
    stamps = {("+", a): k for a in s.pos}
    stamps.update({("-", a): k for a in s.neg})
    verdict = session.run(frozenset(s.pos), frozenset(s.neg), stamps, 0)
    return ForbiddenResult(verdict, session.calls, session.exhausted, session.trace)


def forbidden_oracle(p: Program, budget: Optional[ForbiddenBudget] = None) -> Callable:
    """A memoizing ``atom -> bool`` wrapper around :func:`is_forbidden`."""
    profile = analyze_positions(p)
    cache: dict = {}
    instances: dict = {}

    def oracle(a: Atom) -> bool:
        hit = cache.get(a)
        if hit is None:
            hit = cache[a] = is_forbidden(p, SignedPair.of([a]), budget, profile=profile,
                                          instances=instances).verdict
        return hit

    oracle.cache = cache
    return oracle
