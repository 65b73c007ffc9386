"""Answer-set semantics for finite ground programs."""

from __future__ import annotations

import itertools
from array import array
from typing import Iterable, Iterator, Optional

from . import kernel
from .kernel import FALSE, TRUE, UNKNOWN
from .terms import ResourceExceeded, Rule, atom_key, sorted_atoms

MAX_NODES = 10**6


def satisfies(i, r: Rule) -> bool:
    """``(H u B-) & I`` nonempty or ``B+ - I`` nonempty."""
    if r.head is not None and r.head in i:
        return True
    if any(a in i for a in r.neg):
        return True
    return not all(a in i for a in r.pos)


def is_model(g: Iterable[Rule], i) -> bool:
    i = i if isinstance(i, (set, frozenset)) else set(i)
    return all(satisfies(i, r) for r in g)


def proof_stages(g: Iterable[Rule], i) -> dict:
    """Stage at which each atom of ``i`` is derived by the reduct of ``g``.

    Only rules whose negative body misses ``i`` and whose head lies in ``i``
    take part; constraints never prove anything.
    """
    i = i if isinstance(i, (set, frozenset)) else set(i)
    usable = [r for r in g if r.head is not None and r.head in i
              and not any(a in i for a in r.neg)]
    stage: dict = {}
    level = 0
    while True:
        new = {r.head for r in usable
               if r.head not in stage and all(b in stage for b in r.pos)}
        if not new:
            return stage
        for a in new:
            stage[a] = level
        level += 1


def is_answer_set(g: Iterable[Rule], i, witness: bool = False):
    """True iff ``i`` is a model of ``g`` in which every atom is proven.

    With ``witness=True`` returns ``(verdict, ordering)`` where the ordering
    maps each atom to its derivation stage (None when the verdict is False).
    """
    g = list(g)
    i = frozenset(i)
    ok = is_model(g, i)
    stages = proof_stages(g, i) if ok else {}
    ok = ok and len(stages) == len(i)
    if witness:
        return ok, (stages if ok else None)
    return ok


def check_ordering(g: Iterable[Rule], i, phi: dict) -> bool:
    """Every atom of ``i`` is proven under ``phi`` by some rule of ``g``."""
    i = frozenset(i)
    if set(phi) != set(i):
        return False
    g = list(g)
    for a in i:
        for r in g:
            if r.head != a:
                continue
            others = set(r.heads) - {a}
            if (all(b in i for b in r.pos)
                    and not any(b in i for b in r.neg)
                    and not (others & i)
                    and all(phi[b] < phi[a] for b in r.pos)):
                break
        else:
            return False
    return True


class GroundProgram:
    """Integer encoding of a finite ground program for the kernels.

    Atom ids follow insertion order; rules can be added incrementally.  The
    search branches in global term order through :meth:`branch_order`.
    """

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules: list = []
        self.atoms: list = []
        self.ids: dict = {}
        self._seen: set = set()
        self._heads: list = []
        self._pos: list = []
        self._neg: list = []
        self._occ: list = []
        self.constraints: list = []
        self._packed = None
        self._order = None
        self.add(rules)

    def _id(self, a) -> int:
        k = self.ids.get(a)
        if k is None:
            k = self.ids[a] = len(self.atoms)
            self.atoms.append(a)
            self._occ.append([])
        return k

    def add(self, rules: Iterable[Rule]) -> None:
        for r in rules:
            if r in self._seen:
                continue
            self._seen.add(r)
            k = len(self.rules)
            self.rules.append(r)
            self._heads.append(-1 if r.head is None else self._id(r.head))
            # deduplicated positive bodies keep the kernel counters exact
            pos = list(dict.fromkeys(self._id(a) for a in r.pos))
            self._pos.append(pos)
            self._neg.append([self._id(a) for a in r.neg])
            for a in pos:
                self._occ[a].append(k)
            if r.head is None:
                self.constraints.append(k)
            self._packed = self._order = None

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def packed(self) -> tuple:
        if self._packed is None:
            heads = array("i", self._heads)
            pos_ptr, pos_atoms = _flatten(self._pos)
            neg_ptr, neg_atoms = _flatten(self._neg)
            occ_ptr, occ_rules = _flatten(self._occ)
            self._packed = (heads, pos_ptr, pos_atoms, neg_ptr, neg_atoms, occ_ptr, occ_rules)
        return self._packed

    def branch_order(self) -> list:
        if self._order is None:
            self._order = sorted(range(self.n_atoms), key=lambda k: atom_key(self.atoms[k]))
        return self._order

    def bounds(self, assign: bytearray):
        heads, pos_ptr, pos_atoms, neg_ptr, neg_atoms, occ_ptr, occ_rules = self.packed()
        return kernel.bounds(self.n_atoms, heads, pos_ptr, pos_atoms, neg_ptr, neg_atoms,
                             occ_ptr, occ_rules, assign)

    def constraint_violated(self, assign: bytearray) -> bool:
        for k in self.constraints:
            if all(assign[a] == TRUE for a in self._pos[k]) and all(
                    assign[a] == FALSE for a in self._neg[k]):
                return True
        return False


def _flatten(lists):
    ptr = array("i", itertools.accumulate((len(xs) for xs in lists), initial=0))
    flat = array("i", itertools.chain.from_iterable(lists))
    return ptr, flat


def _propagate(gp: GroundProgram, assign: bytearray) -> bool:
    """Tighten ``assign`` in place; False on conflict."""
    while True:
        lower, upper = gp.bounds(assign)
        changed = False
        for a in range(gp.n_atoms):
            v = assign[a]
            if lower[a]:
                if v == FALSE:
                    return False
                if v == UNKNOWN:
                    assign[a] = TRUE
                    changed = True
            elif not upper[a]:
                if v == TRUE:
                    return False
                if v == UNKNOWN:
                    assign[a] = FALSE
                    changed = True
        if not changed:
            return not gp.constraint_violated(assign)


def iter_answer_sets(g: Iterable[Rule], max_nodes: int = MAX_NODES) -> Iterator[frozenset]:
    """Yield the answer sets of a finite ground program one by one.

    Backtracking over atom truth values, smallest atom first, with
    lower/upper least-model propagation at every node.
    """
    gp = g if isinstance(g, GroundProgram) else GroundProgram(g)
    order = gp.branch_order()
    nodes = 0
    stack = [bytearray(gp.n_atoms)]
    while stack:
        assign = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise ResourceExceeded(f"more than {max_nodes} search nodes")
        if not _propagate(gp, assign):
            continue
        a = next((k for k in order if assign[k] == UNKNOWN), None)
        if a is None:
            candidate = frozenset(gp.atoms[k] for k in range(gp.n_atoms) if assign[k] == TRUE)
            if is_answer_set(gp.rules, candidate):
                yield candidate
            continue
        branch_false = bytearray(assign)
        branch_false[a] = FALSE
        assign[a] = TRUE
        stack.append(branch_false)
        stack.append(assign)


def enumerate_answer_sets(g: Iterable[Rule], limit: Optional[int] = None,
                          max_nodes: int = MAX_NODES) -> list:
    """All answer sets of ``g`` (at most ``limit``), in a deterministic order."""
    out = []
    for i in iter_answer_sets(g, max_nodes):
        out.append(i)
        if limit is not None and len(out) >= limit:
            break
    return sorted(out, key=lambda s: [atom_key(a) for a in sorted_atoms(s)])
