import itertools

from hypothesis import given, settings, strategies as st

from fp2.terms import (
    Atom, Fn, Literal, Rule, Var, apply, cons, format_atom, format_rule, format_term, is_ground,
    is_variant, make_list, standardize_apart, unify, variables, NIL,
)
from fp2.parser import parse_atom, parse_program, parse_term

X, Y, Z, L, Xs, Ys = (Var(n) for n in ("X", "Y", "Z", "L", "Xs", "Ys"))
a, b = Fn("a"), Fn("b")


def f(*args):
    return Fn("f", args)


def test_unify_identical_ground_atoms():
    assert unify(parse_atom("p(a)"), parse_atom("p(a)")) == {}


def test_unify_occurs_check():
    assert unify(Atom("p", (X,)), Atom("p", (f(X),))) is None


def test_unify_append_head():
    goal = parse_atom("append([a],[b],Z)")
    head = parse_atom("append([X|Xs],L,[X|Ys])")
    s = unify(goal, head)
    assert s == {X: a, Xs: NIL, L: make_list([b]), Z: cons(a, Ys)}
    assert apply(s, goal) == apply(s, head)


def test_unify_functor_and_arity_clash():
    assert unify(Atom("p", (a,)), Atom("p", (b,))) is None
    assert unify(Atom("p", (f(X),)), Atom("p", (Fn("f", (X, Y)),))) is None
    assert unify(Atom("p", (X,)), Atom("q", (X,))) is None


def test_apply_examples():
    assert apply({X: a}, Fn("f", (X, Y))) == Fn("f", (a, Y))
    t = parse_term("g(X,[Y|Z])")
    assert apply({}, t) == t
    s = {X: a, Z: cons(a, Ys)}
    assert apply(s, Atom("append", (X, L, Z))) == Atom("append", (a, L, cons(a, Ys)))


def test_apply_is_simultaneous():
    assert apply({X: Y, Y: X}, Fn("f", (X, Y))) == Fn("f", (Y, X))


def test_standardize_apart_single_clash():
    r = parse_program("p(X) :- q(X).").rules[0]
    fresh, _ = standardize_apart(r, {X})
    assert format_rule(fresh) == "p(X1) :- q(X1)."


def test_standardize_apart_ground_rule_unchanged():
    r = parse_program("p(a).").rules[0]
    fresh, _ = standardize_apart(r, {X})
    assert fresh == r


def test_standardize_apart_append_rule():
    r = parse_program("append([X|Xs],L,[X|Ys]) :- append(Xs,L,Ys).").rules[0]
    fresh, _ = standardize_apart(r, {X, L})
    old = variables(r)
    new = variables(fresh)
    assert len(new) == len(old) == 4
    assert not set(new) & {X, L}
    assert is_variant(r, fresh)


def test_ground_and_vars():
    assert is_ground(parse_atom("p(f(a),[b])"))
    assert not is_ground(parse_atom("p(f(X))"))
    assert variables(parse_atom("p(Y,f(X,Y))")) == [Y, X]


def test_printing():
    assert format_term(make_list([a, b])) == "[a,b]"
    assert format_term(cons(a, X)) == "[a|X]"
    assert format_term(Fn("/", (X, Fn("t")))) == "X/t"
    assert format_atom(Atom("=", (X, Y))) == "X=Y"
    assert format_rule(Rule(Atom("p", (X,)), (Literal(Atom("q", (X,))), Literal(Atom("r", ()), False)))) \
        == "p(X) :- q(X), not r."


# ---------------------------------------------------------------- properties

def terms(depth: int = 2):
    leaves = st.sampled_from([X, Y, a, b])
    return st.recursive(leaves, lambda sub: st.builds(lambda t: Fn("f", (t,)), sub)
                        | st.builds(lambda s, t: Fn("g", (s, t)), sub, sub), max_leaves=4)


atoms = st.tuples(terms(), terms()).map(lambda args: Atom("p", args))


def _ground_terms(depth):
    level = [a, b]
    out = list(level)
    for _ in range(depth):
        level = [Fn("f", (t,)) for t in out] + [Fn("g", (s, t)) for s in out for t in out]
        out = list(dict.fromkeys(out + level))
    return out


GROUND2 = [t for t in _ground_terms(2) if len(format_term(t)) <= 9]


@settings(max_examples=150, deadline=None)
@given(atoms, atoms)
def test_unifier_is_most_general(p, q):
    s = unify(p, q)
    vs = sorted({*variables(p), *variables(q)}, key=lambda v: v.name)
    ground_unifiers = []
    for combo in itertools.product(GROUND2, repeat=len(vs)):
        theta = dict(zip(vs, combo))
        if apply(theta, p) == apply(theta, q):
            ground_unifiers.append(theta)
    if s is None:
        assert not ground_unifiers
        return
    assert apply(s, p) == apply(s, q)
    # idempotent
    assert apply(s, apply(s, p)) == apply(s, p)
    # every ground unifier factors through s
    for theta in ground_unifiers:
        for v in vs:
            assert apply(theta, apply(s, v)) == theta[v]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(["X", "Y", "Z", "X1", "Y2"]), max_size=4, unique=True), atoms, atoms)
def test_standardize_apart_disjoint_variant(avoid, head, body):
    r = Rule(head, (Literal(body, False),))
    avoid_vars = {Var(n) for n in avoid}
    fresh, _ = standardize_apart(r, avoid_vars)
    assert not set(variables(fresh)) & avoid_vars
    assert is_variant(r, fresh)
