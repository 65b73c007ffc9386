import pytest

from aspfun.consistency import Budget
from aspfun.forbidden import forbidden_oracle
from aspfun.ground_nf import GroundingResult, ground_not_forbidden, never_forbidden, validate_grounding
from aspfun.solve import enumerate_answer_sets
from aspfun.syntax import parse_atom, parse_program
from aspfun.terms import Rule

EX1_ANSWER = frozenset(parse_atom(a) for a in ("r(a,b)", "stop(b)", "r(b,f(b))", "stop(f(b))"))


def test_example1(ex1):
    g = ground_not_forbidden(ex1, forbidden_oracle(ex1))
    assert g.complete
    assert enumerate_answer_sets(g.rules) == [EX1_ANSWER]
    assert validate_grounding(ex1, g, 2)


def test_example6(ex6):
    g = ground_not_forbidden(ex6, forbidden_oracle(ex6))
    assert g.complete
    assert enumerate_answer_sets(g.rules) == []
    assert validate_grounding(ex6, g, 3)


def test_example5(ex5):
    g = ground_not_forbidden(ex5, forbidden_oracle(ex5))
    assert g.complete
    assert enumerate_answer_sets(g.rules) == []


def test_facts():
    p = parse_program("p(a). q(b).")
    g = ground_not_forbidden(p, never_forbidden)
    assert g.complete and g.levels == 2
    assert g.rules == frozenset(p.rules)


def test_forbidden_heads_become_constraints(ex1):
    g = ground_not_forbidden(ex1, forbidden_oracle(ex1))
    constraints = [r for r in g.rules if r.head is None]
    assert g.constraints_added == len(constraints) >= 1
    for c in constraints:
        assert c.pos or c.neg


def test_without_oracle_diverges(ex6):
    g = ground_not_forbidden(ex6, budget=Budget(max_iterations=20))
    assert not g.complete and g.levels == 20


def test_corrupted_output_fails(ex1):
    g = ground_not_forbidden(ex1, forbidden_oracle(ex1))
    broken = GroundingResult(g.rules - {Rule(parse_atom("r(a,b)"))}, True, g.levels)
    assert not validate_grounding(ex1, broken, 2)


def test_incomplete_rejected(ex6):
    g = ground_not_forbidden(ex6, budget=Budget(max_iterations=3))
    with pytest.raises(ValueError):
        validate_grounding(ex6, g, 2)


def test_sorted_is_deterministic(ex1):
    g = ground_not_forbidden(ex1, forbidden_oracle(ex1))
    assert [str(r) for r in g.sorted()] == [str(r) for r in g.sorted()]
    assert len(g.sorted()) == len(g.rules)
