import pytest

from aspfun.syntax import (
    ArityMismatch,
    ProgramSyntaxError,
    UnsafeRule,
    analyze_positions,
    format_program,
    parse_atom,
    parse_program,
    parse_term,
)
from aspfun.terms import Atom, Const, Func, Int, Rule, Var

from conftest import CORPUS


def test_single_fact():
    p = parse_program("r(a,b).")
    assert p.rules == (Rule(Atom("r", (Const("a"), Const("b")))),)
    assert len(p.facts) == 1


def test_example1_rules(ex1):
    assert len(ex1) == 3
    chain = next(r for r in ex1 if r.neg)
    assert chain.head == parse_atom("r(Y,f(Y))")
    assert chain.pos == (parse_atom("r(X,Y)"),)
    assert chain.neg == (parse_atom("stop(X)"),)


def test_unsafe_negative_variable():
    with pytest.raises(UnsafeRule) as e:
        parse_program("p(X) :- not q(X).")
    assert e.value.variable == "X"


def test_unsafe_head_variable():
    with pytest.raises(UnsafeRule):
        parse_program("p(X,Y) :- q(X).")


def test_arity_clash():
    with pytest.raises(ArityMismatch):
        parse_program("p(a). p(a,b).")
    with pytest.raises(ArityMismatch):
        parse_program("p(f(a)). q(f(a,b)).")


@pytest.mark.parametrize("text", ["p(a", "p(a) :- .", "p(a) q(b).", "p(X.", "not p."])
def test_syntax_errors(text):
    with pytest.raises(ProgramSyntaxError):
        parse_program(text)


def test_syntax_error_position():
    with pytest.raises(ProgramSyntaxError) as e:
        parse_program("p(a).\nq(b) :- r(.\n")
    assert e.value.line == 2


def test_empty_constraint():
    p = parse_program(":- .")
    assert p.rules == (Rule(None),)
    assert str(p.rules[0]) == ":- ."


def test_terms():
    assert parse_term("f(g(a),X,3)") == Func("f", (Func("g", (Const("a"),)), Var("X"), Int(3)))
    assert str(parse_term("N+1")) == "N+1"


def test_interval_facts():
    p = parse_program("steps(0..3).")
    assert {str(r.head) for r in p} == {"steps(0)", "steps(1)", "steps(2)", "steps(3)"}


def test_comments_ignored():
    p = parse_program("% header\np(a). % trailing\n")
    assert len(p) == 1


def test_builtins_parsed():
    p = parse_program("q(a). q(b). d(X,Y) :- q(X), q(Y), X != Y.")
    r = p.rules[-1]
    assert len(r.builtins) == 1 and str(r.builtins[0]) == "X != Y"


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.lp")), ids=lambda p: p.name)
def test_round_trip(path):
    p = parse_program(path.read_text())
    text = format_program(p)
    q = parse_program(text)
    assert q.rules == p.rules
    assert format_program(q) == text


class TestPositions:
    def test_example5(self, ex5):
        prof = analyze_positions(ex5)
        assert not prof[("fct", 1)].allows_functional
        assert prof[("fct", 1)].constant_pool == {Const("a"), Const("b")}
        assert prof[("fct", 2)].allows_functional

    def test_example1(self, ex1):
        prof = analyze_positions(ex1)
        assert prof[("r", 1)].allows_functional
        assert prof[("r", 2)].allows_functional

    def test_single_fact(self):
        prof = analyze_positions(parse_program("p(a)."))
        assert not prof[("p", 1)].allows_functional
        assert prof[("p", 1)].constant_pool == {Const("a")}
