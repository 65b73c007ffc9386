"""Level-saturated grounding that replaces rules with forbidden heads by constraints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .consistency import Budget
from .ground import LevelGrounder, ground_with_terms, herbrand_terms, sorted_rules
from .solve import enumerate_answer_sets
from .terms import Program, ResourceExceeded, Rule


@dataclass(frozen=True)
class GroundingResult:
    rules: frozenset
    complete: bool
    levels: int
    constraints_added: int = 0

    def sorted(self) -> list:
        return sorted_rules(self.rules)


def never_forbidden(_atom) -> bool:
    return False


def ground_not_forbidden(p: Program, oracle: Optional[Callable] = None,
                         budget: Optional[Budget] = None) -> GroundingResult:
    """Instantiate ``p`` level by level against the atoms derived so far.

    An instance whose head the oracle certifies forbidden contributes the
    constraint ``:- body`` instead of itself and derives nothing.  The
    oracle must be sound; its verdicts are cached per atom.
    """
    oracle = oracle or never_forbidden
    budget = budget or Budget()
    verdicts: dict = {}

    def forbidden(a) -> bool:
        hit = verdicts.get(a)
        if hit is None:
            hit = verdicts[a] = bool(oracle(a))
        return hit

    grounder = LevelGrounder(p, budget.max_ground_rules)
    out: set = set()
    added = 0
    level: set = set()
    i = 0
    try:
        batch = grounder.initial()
        while True:
            i += 1
            if i > budget.max_iterations:
                return GroundingResult(frozenset(out), False, i - 1, added)
            new_atoms = set()
            for r in batch:
                if r.head is not None and forbidden(r.head):
                    c = Rule(None, r.pos, r.neg)
                    if c not in out:
                        out.add(c)
                        added += 1
                    continue
                out.add(r)
                if r.head is not None and r.head not in level:
                    new_atoms.add(r.head)
            if not new_atoms:
                return GroundingResult(frozenset(out), True, i, added)
            level |= new_atoms
            if len(level) > budget.max_atoms:
                return GroundingResult(frozenset(out), False, i, added)
            batch = grounder.extend(new_atoms)
    except ResourceExceeded:
        return GroundingResult(frozenset(out), False, i, added)


def validate_grounding(p: Program, g: GroundingResult, depth: int) -> bool:
    """Compare answer sets of ``g`` with those of the naive depth-bounded grounding."""
    if not g.complete:
        raise ValueError("grounding is incomplete")
    reference = ground_with_terms(p, herbrand_terms(p, depth))
    return set(enumerate_answer_sets(g.rules)) == set(enumerate_answer_sets(reference))
