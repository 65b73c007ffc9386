"""Incremental semi-decision of consistency (existence of a finite answer set)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .forbidden import ForbiddenBudget
from .ground import MAX_GROUND_RULES, LevelGrounder, active
from .solve import MAX_NODES, GroundProgram, iter_answer_sets
from .terms import Program, ResourceExceeded


@dataclass(frozen=True)
class Budget:
    max_iterations: int = 100
    max_atoms: int = 10**5
    max_ground_rules: int = MAX_GROUND_RULES
    max_nodes: int = MAX_NODES
    forbidden: ForbiddenBudget = field(default_factory=ForbiddenBudget)

    def __post_init__(self):
        for name in ("max_iterations", "max_atoms", "max_ground_rules", "max_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Consistent:
    witness: frozenset
    iterations: int

    name = "consistent"


@dataclass(frozen=True)
class Inconsistent:
    iterations: int

    name = "inconsistent"


@dataclass(frozen=True)
class BudgetExhausted:
    last_level: frozenset
    iterations: int
    reason: str = ""

    name = "budget-exhausted"


Outcome = Consistent | Inconsistent | BudgetExhausted

# observer(i, A_i, P_i) is called once per executed level
Observer = Callable[[int, frozenset, list], None]


def is_consistent(p: Program, budget: Optional[Budget] = None,
                  pruning: Optional[Callable] = None,
                  observer: Optional[Observer] = None) -> Outcome:
    """Build levels ``A_i`` of derivable atoms and look for an answer set of
    the rules grounded so far that leaves no rule of ``p`` violated.

    ``pruning`` is an ``atom -> bool`` oracle; atoms it reports forbidden
    never enter a level.  Verdicts are memoized for the run.
    """
    budget = budget or Budget()
    if pruning is not None:
        pruning = _memo(pruning)
    grounder = LevelGrounder(p, budget.max_ground_rules)
    level: frozenset = frozenset()
    rules: list = []
    gp = GroundProgram()
    i = 0
    try:
        rules = grounder.initial()
        gp.add(rules)
        while True:
            i += 1
            if i > budget.max_iterations:
                return BudgetExhausted(level, i - 1, "iterations")
            heads = {r.head for r in rules if r.head is not None and r.head not in level}
            if pruning is not None:
                heads = {a for a in heads if not pruning(a)}
            if not heads:
                return Inconsistent(i)
            new_level = level | heads
            if len(new_level) > budget.max_atoms:
                return BudgetExhausted(level, i - 1, "atoms")
            new_rules = grounder.extend(heads)
            gp.add(new_rules)
            rules.extend(new_rules)
            level = new_level
            if observer is not None:
                observer(i, level, rules)
            for candidate in iter_answer_sets(gp, budget.max_nodes):
                if not active(p, candidate):
                    return Consistent(candidate, i)
    except ResourceExceeded as e:
        return BudgetExhausted(level, i, str(e))


def _memo(oracle: Callable) -> Callable:
    cache: dict = {}

    def wrapped(a):
        hit = cache.get(a)
        if hit is None:
            hit = cache[a] = bool(oracle(a))
        return hit

    return wrapped
