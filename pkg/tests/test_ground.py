import pytest

from aspfun.ground import (
    LevelGrounder,
    active,
    apply,
    ground_with_terms,
    herbrand_terms,
    match_positive_body,
)
from aspfun.syntax import parse_atom, parse_program, parse_term
from aspfun.terms import Const, ResourceExceeded, Rule, Var

CHAIN = "r(Y,f(Y)) :- r(X,Y), not stop(X)."
STOP = "stop(Y) :- r(X,Y)."


def T(*texts):
    return {parse_term(t) for t in texts}


def rule(text):
    return parse_program(text).rules[0]


def test_herbrand_depth0(ex1):
    assert herbrand_terms(ex1, 0) == T("a", "b")


def test_herbrand_depth2(ex1):
    assert herbrand_terms(ex1, 2) == T("a", "b", "f(a)", "f(b)", "f(f(a))", "f(f(b))")


def test_herbrand_function_free():
    p = parse_program("p(a). q(X) :- p(X).")
    assert herbrand_terms(p, 5) == T("a")


def test_herbrand_monotone(ex5):
    prev = set()
    for d in range(4):
        cur = herbrand_terms(ex5, d)
        assert prev <= cur
        prev = cur


def test_herbrand_cap(ex5):
    with pytest.raises(ResourceExceeded):
        herbrand_terms(ex5, 6, cap=10)


def test_apply_rule():
    s = {Var("X"): Const("a"), Var("Y"): Const("b")}
    assert apply(s, rule(CHAIN)) == rule("r(b,f(b)) :- r(a,b), not stop(a).")


def test_apply_identity():
    r = rule(CHAIN)
    assert apply({}, r) == r


def test_apply_atom():
    assert apply({Var("Y"): parse_term("f(b)")}, parse_atom("stop(Y)")) == parse_atom("stop(f(b))")


def test_match_body():
    r = rule(CHAIN)
    assert match_positive_body(r, {parse_atom("r(a,b)")}) == [
        {Var("X"): Const("a"), Var("Y"): Const("b")}]
    assert match_positive_body(r, set()) == []


def test_match_body_two():
    got = match_positive_body(rule(STOP), {parse_atom("r(a,b)"), parse_atom("r(b,f(b))")})
    want = [{Var("X"): Const("a"), Var("Y"): Const("b")},
            {Var("X"): Const("b"), Var("Y"): parse_term("f(b)")}]
    assert sorted(map(str, got)) == sorted(map(str, want))


def test_ground_example1_two_terms(ex1):
    g = ground_with_terms(ex1, T("a", "b"))
    facts = [r for r in g if not r.pos and not r.neg]
    assert len(g) == 9 and len(facts) == 1
    assert sum(1 for r in g if r.head.predicate == "stop") == 4


def test_ground_no_terms(ex1):
    assert ground_with_terms(ex1, set()) == {rule("r(a,b).")}


def test_ground_single():
    p = parse_program("p(X) :- q(X).")
    assert ground_with_terms(p, T("a")) == {rule("p(a) :- q(a).")}


def test_ground_drops_failed_builtins():
    p = parse_program("q(a). q(b). d(X,Y) :- q(X), q(Y), X != Y.")
    g = ground_with_terms(p, T("a", "b"))
    assert {str(r) for r in g if r.pos} == {"d(a,b) :- q(a), q(b).", "d(b,a) :- q(b), q(a)."}


def test_ground_arith():
    p = parse_program("s(0). s(N+1) :- s(N), lim(N+1). lim(1).")
    g = ground_with_terms(p, set(p.constants))
    assert rule("s(1) :- s(0), lim(1).") in g


def test_active_empty(ex1):
    assert active(ex1, set()) == {rule("r(a,b).")}


def test_active_answer_set(ex1):
    i = {parse_atom(a) for a in ("r(a,b)", "stop(b)", "r(b,f(b))", "stop(f(b))")}
    assert active(ex1, i) == set()


def test_active_constraint():
    p = parse_program(":- not p. q :- p.")
    assert active(p, set()) == {Rule(None, (), (parse_atom("p"),))}


def test_active_partial(ex1):
    got = active(ex1, {parse_atom("r(a,b)")})
    assert {str(r) for r in got} == {"stop(b) :- r(a,b).", "r(b,f(b)) :- r(a,b), not stop(a)."}


def test_level_grounder_matches_naive(ex1):
    lg = LevelGrounder(ex1)
    rules = set(lg.initial())
    atoms = set()
    for _ in range(4):
        atoms |= {r.head for r in rules}
        rules |= set(lg.extend(atoms))
    full = ground_with_terms(ex1, herbrand_terms(ex1, 6))
    body_in = {r for r in full if all(a in atoms for a in r.pos)}
    assert rules == body_in
