import random

from hypothesis import given, settings, strategies as st

from fp2.norms import compare, nocc, norm
from fp2.parser import parse_term
from fp2.terms import Var

from oracles import GroundingOracle, random_term, random_vec


def vec(*texts):
    return tuple(parse_term(t) for t in texts)


def test_norm_examples():
    assert norm(vec("X")) == 1
    assert norm(vec("f(X,g(a))")) == 4
    assert norm(vec("X", "f(a)")) == 3
    assert norm(()) == 0


def test_nocc_examples():
    assert nocc(Var("X"), vec("X", "f(X,Y)")) == 2
    assert nocc(Var("Y"), vec("f(a)")) == 0
    assert nocc("f", vec("f(f(a))")) == 2
    assert nocc(("f", 1), vec("f(f(a))", "f(a,b)")) == 2


def test_strictly_smaller_chain():
    assert compare(vec("X"), vec("f(X)")).strict_less
    r = compare(vec("f(X)"), vec("g(X)"))
    assert r.less_eq and not r.strict_less


def test_almost_never_larger_without_less_eq():
    r = compare(vec("g(g(a),X)"), vec("X", "X"))
    assert r.almost_never_larger and not r.less_eq


def test_unbounded_shared_variable_is_not_almost_never_larger():
    # Y=a with X arbitrary gives infinitely many larger instances
    t, u = vec("f(X,g(a))"), vec("f(X,Y)")
    r = compare(t, u)
    assert not r.less_eq and not r.almost_never_larger
    assert GroundingOracle(t, u).pumping_witness() is not None


def test_incomparable_renamed():
    r = compare(vec("f(X)"), vec("f(Y)"))
    assert (r.strict_less, r.less_eq, r.almost_never_larger) == (False, False, False)


def test_shared_variables_block_almost_never_larger():
    r = compare(vec("X", "Y", "f(a)"), vec("X", "Y", "Y"))
    assert not r.almost_never_larger


def test_empty_sequences():
    r = compare((), ())
    assert r.less_eq and r.almost_never_larger and not r.strict_less


_rng = random.Random(7)


@st.composite
def vectors(draw):
    seed = draw(st.integers(0, 10**9))
    return random_vec(random.Random(seed))


@settings(max_examples=300, deadline=None)
@given(vectors(), vectors(), st.randoms(use_true_random=False))
def test_permutation_insensitive(t, u, rnd):
    t1 = list(t)
    rnd.shuffle(t1)
    assert compare(tuple(t1), u) == compare(t, u)
    assert compare(u, tuple(t1)) == compare(u, t)


@settings(max_examples=300, deadline=None)
@given(vectors(), vectors())
def test_implication_chain(t, u):
    r = compare(t, u)
    assert not r.strict_less or r.less_eq
    assert not r.less_eq or r.almost_never_larger


@settings(max_examples=150, deadline=None)
@given(vectors(), vectors())
def test_agrees_with_grounding_oracle(t, u):
    r = compare(t, u)
    oracle = GroundingOracle(t, u)
    if r.strict_less:
        assert oracle.always_smaller()
    if r.less_eq:
        assert oracle.never_larger()
    if not r.strict_less:
        assert oracle.refute(strict=True) is not None
    if not r.less_eq:
        assert oracle.refute(strict=False) is not None
    if not r.almost_never_larger:
        assert oracle.pumping_witness() is not None
    else:
        assert oracle.eventually_never_larger()


def test_self_comparison():
    for _ in range(50):
        t = (random_term(_rng, 3),)
        r = compare(t, t)
        assert r.less_eq and not r.strict_less
