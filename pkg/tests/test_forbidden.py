import pytest

from aspfun.forbidden import (
    ForbiddenBudget,
    FreshSupply,
    SignedPair,
    TermUniverse,
    closure_stages,
    forbidden_oracle,
    format_subst,
    has_support,
    head_matches,
    is_forbidden,
    r_extensions,
    r_minus,
    r_plus,
    signed_closure,
)
from aspfun.syntax import analyze_positions, parse_atom, parse_program, parse_term
from aspfun.terms import Atom, Const, Fresh, Func, Var

from conftest import load


def A(*texts):
    return {parse_atom(t) for t in texts}


def rule_with(p, text):
    want = parse_program(text).rules[0]
    return next(r for r in p.rules if r == want)


CHAIN = "r(Y,f(Y)) :- r(X,Y), not stop(X)."
STOP = "stop(Y) :- r(X,Y)."


class TestRPlus:
    def test_forward(self, ex1):
        assert r_plus(rule_with(ex1, STOP), A("r(a,b)"), set()) == A("stop(b)")

    def test_no_positive_support(self, ex1):
        assert r_plus(rule_with(ex1, CHAIN), set(), A("r(b,f(b))")) == set()

    def test_backward_negative(self, ex1):
        assert r_plus(rule_with(ex1, CHAIN), A("r(a,b)"), A("r(b,f(b))")) == A("stop(a)")

    def test_constraint_single_negative(self):
        p = parse_program("q(a). :- q(X), not p(X).")
        assert r_plus(p.rules[1], A("q(a)"), set()) == A("p(a)")

    def test_two_negatives_no_backward(self):
        p = parse_program("q(a). h(X) :- q(X), not p(X), not s(X).")
        assert r_plus(p.rules[1], A("q(a)"), A("h(a)")) == set()


class TestRMinus:
    def test_positive_body_must_fail(self, ex1):
        u = TermUniverse.for_atoms(ex1, A("r(b,f(b))", "stop(a)"))
        got = r_minus(rule_with(ex1, CHAIN), set(), A("r(b,f(b))", "stop(a)"), u)
        assert got == A("r(a,b)")

    def test_completions_over_universe(self, ex1):
        # head r(b,f(b)) false fixes Y/b; X is open and stop(X) must be false too
        ln = A("r(b,f(b))", "stop(a)", "stop(b)", "stop(f(b))")
        u = TermUniverse.for_atoms(ex1, ln)
        got = r_minus(rule_with(ex1, CHAIN), set(), ln, u)
        assert got == A("r(a,b)", "r(b,b)", "r(f(b),b)")

    def test_two_positive_atoms(self):
        p = parse_program("q(a). s(a). h(X) :- q(X), s(X).")
        u = TermUniverse.for_atoms(p, A("h(a)"))
        assert r_minus(p.rules[2], set(), A("h(a)"), u) == set()

    def test_head_not_false(self, ex1):
        u = TermUniverse.for_atoms(ex1, A("r(a,b)"))
        assert r_minus(rule_with(ex1, STOP), set(), A("r(a,b)"), u) == set()


class TestClosure:
    def test_example6(self, ex6):
        c = signed_closure(ex6, SignedPair.of(A("r(f(b),f(f(b)))")))
        # stop(a) comes from the backward clause of r+ on the chain rule
        assert c.pos == A("r(f(b),f(f(b)))", "r(a,b)", "stop(b)", "stop(f(f(b)))", "stop(a)")
        assert c.neg == A("r(b,f(b))")

    def test_empty_pair(self, ex1):
        c = signed_closure(ex1, SignedPair())
        assert c.pos == A("r(a,b)", "stop(b)")
        assert c.neg == set()

    def test_example5(self, ex5):
        c = signed_closure(ex5, SignedPair.of(A("fct(a,s(s(0)))")))
        assert A("fct(a,0)", "fct(b,s(0))", "eq(a,a)", "eq(b,b)", "lt(0,s(0))",
                 "lt(s(0),s(s(0)))", "lt(0,s(s(0)))", "diff(0,s(0))",
                 "diff(s(0),s(s(0)))", "diff(0,s(s(0)))") <= c.pos
        assert c.neg == A("redundant")

    def test_stages_grow(self, ex6):
        stages = closure_stages(ex6, SignedPair.of(A("r(f(b),f(f(b)))")))
        for a, b in zip(stages, stages[1:]):
            assert a.pos <= b.pos and a.neg <= b.neg
        assert stages[-1] == signed_closure(ex6, SignedPair.of(A("r(f(b),f(f(b)))")))

    def test_restricted_to_term_atoms(self, ex1):
        c = signed_closure(ex1, SignedPair.of(A("r(a,b)")))
        assert parse_atom("r(b,f(b))") not in c.pos


def naive_stages(p, s):
    """The closure recurrence applied literally, one full round at a time."""
    u = TermUniverse.for_atoms(p, s.pos | s.neg)
    pos, neg = set(s.pos), set(s.neg)
    out = [SignedPair(frozenset(pos), frozenset(neg))]
    while True:
        add_pos = {a for r in p.rules for a in r_plus(r, pos, neg) if u.ta_contains(a)} - pos
        add_neg = {a for r in p.rules for a in r_minus(r, pos, neg, u) if u.ta_contains(a)} - neg
        if not add_pos and not add_neg:
            return out
        pos |= add_pos
        neg |= add_neg
        out.append(SignedPair(frozenset(pos), frozenset(neg)))


NAIVE_CASES = [
    ("example1.lp", ["r(a,b)"], []),
    ("example1.lp", [], ["stop(b)"]),
    ("example5.lp", ["fct(a,s(s(0)))"], []),
    ("example5.lp", ["fct(a,s(s(0)))", "fct(b,0)"], ["eq(a,b)"]),
    ("example6.lp", ["r(f(b),f(f(b)))"], []),
    ("example6.lp", ["r(f(b),f(f(b)))", "r(b,f(b))"], ["r(b,f(b))", "stop(b)"]),
    ("example3.lp", ["next(d,f(d))"], ["last(f(d))"]),
    ("evenloop.lp", ["q(a)"], ["s(f(a))"]),
    ("coloring.lp", ["color(1,red)"], ["color(2,green)"]),
]


@pytest.mark.parametrize("name,pos,neg", NAIVE_CASES)
def test_stages_match_naive_recurrence(name, pos, neg):
    p = load(name)
    s = SignedPair.of(A(*pos), A(*neg))
    assert closure_stages(p, s) == naive_stages(p, s)


class TestSupport:
    def test_fact(self, ex1):
        assert has_support(parse_atom("r(a,b)"), ex1, SignedPair())

    def test_diff_unsupported(self, ex5):
        c = signed_closure(ex5, SignedPair.of(A("fct(a,s(s(0)))")))
        assert not has_support(parse_atom("diff(0,s(s(0)))"), ex5, c)

    def test_rule(self, ex1):
        assert has_support(parse_atom("stop(b)"), ex1, SignedPair.of(A("r(a,b)")))


class TestExtensions:
    def test_fresh_variable(self, ex6):
        r = rule_with(ex6, CHAIN)
        ext = r_extensions(r, {Var("Y"): parse_term("f(b)")}, analyze_positions(ex6), FreshSupply())
        assert ext == [{Var("Y"): parse_term("f(b)"), Var("X"): Fresh(0)}]

    def test_constant_positions(self, ex5):
        r = rule_with(ex5, "diff(N,M) :- fct(X,N), fct(Y,M), not eq(X,Y), lt(N,M).")
        sigma = {Var("N"): parse_term("0"), Var("M"): parse_term("s(s(0))")}
        ext = r_extensions(r, sigma, analyze_positions(ex5))
        pairs = {(str(e[Var("X")]), str(e[Var("Y")])) for e in ext}
        assert pairs == {("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")}
        assert all(e[Var("N")] == sigma[Var("N")] for e in ext)

    def test_nothing_to_extend(self):
        p = parse_program("p(X) :- q(X). q(a).")
        sigma = {Var("X"): Const("a")}
        assert r_extensions(p.rules[0], sigma, analyze_positions(p)) == [sigma]


class TestHeadMatches:
    def test_plain(self, ex6):
        ms = list(head_matches(ex6, parse_atom("r(f(b),f(f(b)))")))
        assert len(ms) == 1
        assert ms[0].sigma == {Var("Y"): parse_term("f(b)")} and ms[0].g == {}

    def test_fresh_rewritten(self, ex6):
        a = Atom("r", (Fresh(0), parse_term("f(b)")))
        chain = [m for m in head_matches(ex6, a) if m is not None]
        assert chain and chain[0].g == {Fresh(0): Const("b")}

    def test_escape(self):
        p = parse_program("q(a). r(X,Y) :- q(X), q(Y).")
        a = Atom("r", (Fresh(0), Const("a")))
        assert list(head_matches(p, a)) == [None]


class TestIsForbidden:
    def test_example7(self, ex6):
        res = is_forbidden(ex6, SignedPair.of(A("r(f(b),f(f(b)))")))
        assert res.verdict and res
        assert not res.exhausted

    def test_example5(self, ex5):
        assert is_forbidden(ex5, SignedPair.of(A("fct(a,s(s(0)))"))).verdict

    def test_answer_set_atom(self, ex1):
        assert not is_forbidden(ex1, SignedPair.of(A("r(a,b)"))).verdict

    def test_contradiction(self, ex1):
        assert is_forbidden(ex1, SignedPair.of(A("stop(b)"), A("stop(b)"))).verdict

    def test_deterministic_trace(self, ex6):
        s = SignedPair.of(A("r(f(b),f(f(b)))"))
        t1 = [str(e) for e in is_forbidden(ex6, s, trace=True).trace]
        t2 = [str(e) for e in is_forbidden(ex6, s, trace=True).trace]
        assert t1 == t2 and t1

    def test_budget_exhaustion_is_false(self, ex5):
        res = is_forbidden(ex5, SignedPair.of(A("fct(a,s(s(0)))")), ForbiddenBudget(max_calls=2))
        assert not res.verdict and res.exhausted

    def test_depth_budget(self, ex5):
        res = is_forbidden(ex5, SignedPair.of(A("fct(a,s(s(0)))")), ForbiddenBudget(max_depth=1))
        assert not res.verdict and res.exhausted

    def test_oracle_memoizes(self, ex6):
        oracle = forbidden_oracle(ex6)
        a = parse_atom("r(f(b),f(f(b)))")
        assert oracle(a) and oracle(a)
        assert oracle.cache == {a: True}


def test_format_subst():
    assert format_subst({}) == "id"
    assert format_subst({Var("Y"): Func("f", (Const("b"),)), Var("X"): Fresh(1)}) == "[X/$c1, Y/f(b)]"


def test_fresh_supply():
    f = FreshSupply(3)
    assert (f(), f()) == (Fresh(3), Fresh(4))
    assert f.issued == 5


@pytest.mark.parametrize("atom", ["stop(b)", "r(b,f(b))", "stop(f(b))"])
def test_example1_atoms_not_forbidden(ex1, atom):
    assert not is_forbidden(ex1, SignedPair.of(A(atom))).verdict


def test_example1_unprovable_atom(ex1):
    # nothing can derive r(_,a), so stop(a) is in no answer set
    assert is_forbidden(ex1, SignedPair.of(A("stop(a)"))).verdict
