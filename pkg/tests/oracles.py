"""Reference implementations written directly from the definitions.

They share nothing with the package beyond the term and rule classes, and
favour obviousness over speed.
"""

import itertools
import random

from aspfun.terms import Atom, Rule


def is_model(rules, i):
    for r in rules:
        head_ok = r.head is not None and r.head in i
        neg_ok = any(a in i for a in r.neg)
        pos_fail = any(a not in i for a in r.pos)
        if not (head_ok or neg_ok or pos_fail):
            return False
    return True


def proving_order(rules, i):
    """Build an ordering of ``i`` atom by atom; None if some atom stays unproven.

    An atom may be placed once some rule with that head has its positive body
    already placed and its negative body outside ``i``.  Placing an atom never
    blocks another, so the greedy construction finds an ordering whenever one
    exists.
    """
    placed = []
    done = set()
    left = set(i)
    while left:
        ready = [a for a in left
                 if any(r.head == a and all(b in done for b in r.pos)
                        and not any(b in i for b in r.neg) for r in rules)]
        if not ready:
            return None
        for a in ready:
            placed.append(a)
            done.add(a)
        left -= set(ready)
    return {a: k for k, a in enumerate(placed)}


def is_answer_set(rules, i):
    return is_model(rules, i) and proving_order(rules, i) is not None


def gl_answer_set(rules, i):
    """Reduct check: ``i`` equals the least model of the reduct."""
    reduct = [r for r in rules if r.head is not None and not any(a in i for a in r.neg)]
    if any(r.head is None and all(a in i for a in r.pos) and not any(a in i for a in r.neg)
           for r in rules):
        return False
    m = set()
    changed = True
    while changed:
        changed = False
        for r in reduct:
            if r.head not in m and all(a in m for a in r.pos):
                m.add(r.head)
                changed = True
    return m == set(i)


def brute_force(rules):
    atoms = sorted({a for r in rules for a in r.heads + r.pos + r.neg}, key=str)
    out = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        i = frozenset(a for a, b in zip(atoms, bits) if b)
        if is_answer_set(rules, i):
            out.append(i)
    return out


def random_ground_program(rng: random.Random, n_atoms: int, n_rules: int):
    atoms = [Atom(f"p{k}") for k in range(n_atoms)]
    rules = []
    for _ in range(n_rules):
        head = None if rng.random() < 0.15 else rng.choice(atoms)
        body = rng.sample(atoms, rng.randint(0, min(3, n_atoms)))
        split = rng.randint(0, len(body))
        rules.append(Rule(head, tuple(body[:split]), tuple(body[split:])))
    return rules
