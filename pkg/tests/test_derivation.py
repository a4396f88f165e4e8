import pytest

from fp2.derivation import (
    ALiteral, CUTOFF, CYCLIC, FAIL, SUCCESS, ExternalModel, agoal, annotated_resolvent, derivations,
    format_goal, is_cyclic, ssup,
)
from fp2.errors import DerivationError, LimitExceeded, NotCallSafe
from fp2.parser import parse_atom, parse_program
from fp2.patterns import LITERAL, RELAXED, find_call_pattern
from fp2.terms import Literal, Var, apply, format_literal, format_subst, is_ground, variables

from conftest import load
from oracles import more_general

LOOP = load("loop.lp")


def atom(text):
    return parse_atom(text)


def lit(text, positive=True):
    return Literal(atom(text), positive)


def a_lit(text, *annotation, positive=True):
    return ALiteral(lit(text, positive), tuple(atom(x) for x in annotation))


def test_resolve_with_fact():
    goal, _ = annotated_resolvent(agoal(atom("p(a)")), LOOP.rules[2])
    assert goal == ()
    assert format_goal(goal) == "□"


def test_resolve_grows_annotation():
    goal, theta = annotated_resolvent(agoal(atom("p(a)")), LOOP.rules[0])
    assert goal == (a_lit("q(a)", "p(a)"),)
    assert theta == {Var("X"): atom("p(a)").args[0]}
    goal2, _ = annotated_resolvent(goal, LOOP.rules[1])
    assert goal2 == (a_lit("p(a)", "q(a)", "p(a)"),)
    assert is_cyclic(goal2)
    assert format_goal(goal2) == "p(a)⟨q(a),p(a)⟩"


def test_resolvent_failure_is_none():
    assert annotated_resolvent(agoal(atom("p(b)")), LOOP.rules[2]) is None


def test_leftmost_positive_is_selected():
    goal = (a_lit("r", positive=False), a_lit("p(a)"))
    out, _ = annotated_resolvent(goal, LOOP.rules[0])
    assert out == (a_lit("r", positive=False), a_lit("q(a)", "p(a)"))


def test_cyclic_examples():
    assert is_cyclic((a_lit("p(a)", "q(a)", "p(a)"),))
    assert not is_cyclic((a_lit("q(a)", "p(a)"),))
    assert not is_cyclic((ALiteral(lit("p(a)", False), (atom("p(a)"),)),))
    # syntactic identity, not unifiability
    assert not is_cyclic((a_lit("p(X)", "p(Y)"),))


def _answers(entries):
    return sorted((format_subst(e.answer), tuple(sorted(map(format_literal, e.support)))) for e in entries)


def test_ssup_prunes_loop():
    assert _answers(ssup(agoal(atom("p(a)")), LOOP)) == [("", ())]


def test_ssup_sat_single_support():
    p = load("sat.lp")
    cp = find_call_pattern(p, RELAXED).certificate
    out = ssup(agoal(atom("s(p)")), cp.reordered(p), cp.mapping)
    assert _answers(out) == [("", ("not ns(p)",))]


def test_ssup_member():
    p = load("lists.lp")
    cp = find_call_pattern(p).certificate
    out = ssup(agoal(atom("member(X,[a,b])")), cp.reordered(p), cp.mapping)
    assert _answers(out) == [("X=a", ()), ("X=b", ())]


def test_ssup_rejects_unsafe_goal():
    p = load("member.lp")
    with pytest.raises(NotCallSafe):
        ssup(agoal(atom("member(a,L)")), p, {("member", 2): (2,)})


def test_trace_records_rules():
    out = ssup(agoal(atom("append([a],[b],Z)")), load("append.lp"))
    assert len(out) == 1
    assert [step[0] for step in out[0].trace] == [1, 0]


def test_builtin_equality():
    p = parse_program("p(X,Y) :- q(X), q(Y), not X=Y. q(a). q(b). r(X) :- X=f(a).")
    out = ssup(agoal(atom("p(X,Y)")), p)
    assert _answers(out) == [("X=a, Y=b", ()), ("X=b, Y=a", ())]
    assert _answers(ssup(agoal(atom("r(Z)")), p)) == [("Z=f(a)", ())]


def test_nonground_negative_at_success_is_an_error():
    p = parse_program("p(X) :- not q(X).")
    with pytest.raises(DerivationError):
        ssup(agoal(atom("p(X)")), p)


def test_external_model():
    p = parse_program("p(X) :- q(X), not r(X).")
    ext = ExternalModel(frozenset({("q", 1), ("r", 1)}), frozenset({atom("q(a)"), atom("q(b)"), atom("r(b)")}))
    out = ssup(agoal(atom("p(X)")), p, external=ext)
    assert _answers(out) == [("X=a", ())]


def test_unpruned_with_depth_bound():
    leaves = list(derivations(agoal(atom("p(a)")), LOOP, prune_cycles=False, max_depth=4))
    assert [l.status for l in leaves] == [CUTOFF, SUCCESS, SUCCESS]
    pruned = list(derivations(agoal(atom("p(a)")), LOOP))
    assert [l.status for l in pruned] == [CYCLIC, SUCCESS]


def test_failed_branch():
    leaves = list(derivations(agoal(atom("q(b)")), LOOP))
    assert [l.status for l in leaves] == [CYCLIC]
    leaves = list(derivations(agoal(atom("member(a,[b])")), load("member.lp")))
    assert [l.status for l in leaves] == [FAIL]
    assert leaves[0].note.endswith("member(a,[])")


def test_step_limit():
    p = parse_program("n(z). n(s(X)) :- n(X).")
    with pytest.raises(LimitExceeded):
        list(derivations(agoal(atom("n(X)")), p, max_steps=50))


# certified corpus queries: (file, mode, query)
CORPUS_QUERIES = [
    ("loop.lp", LITERAL, "p(a)"),
    ("member.lp", LITERAL, "member(X,[a,b,c])"),
    ("append.lp", LITERAL, "append(X,Y,[a,b,c])"),
    ("append.lp", LITERAL, "append([a],[b],Z)"),
    ("reverse.lp", LITERAL, "reverse([a,b,c],R)"),
    ("lists.lp", LITERAL, "reverse([a,b,c],R)"),
    ("sat.lp", RELAXED, "s(or(p,not(p)))"),
    ("sat.lp", RELAXED, "s(and(p,not(q)))"),
    ("sat.lp", RELAXED, "ns(r)"),
    ("qbf.lp", LITERAL, "qbf(exists(x,forall(y,or(x,y))),[])"),
    ("qbf.lp", LITERAL, "curr_value(x/V,[y/t,x/f])"),
    ("evenloop.lp", LITERAL, "c"),
]


def certified(name, mode, query):
    p = load(name)
    q = atom(query)
    cp = find_call_pattern(p, mode, goal=[q]).certificate
    return p, cp, q


@pytest.mark.parametrize("name,mode,query", CORPUS_QUERIES)
def test_ssup_entries_are_ground(name, mode, query):
    p, cp, q = certified(name, mode, query)
    entries = ssup(agoal(q), cp.reordered(p), cp.mapping)
    assert entries
    for e in entries:
        assert is_ground(apply(e.answer, q))
        assert all(is_ground(l.atom) and not l.positive for l in e.support)


@pytest.mark.parametrize("name,mode,query", CORPUS_QUERIES)
def test_acyclic_supports_subsume_cyclic_ones(name, mode, query):
    p, cp, q = certified(name, mode, query)
    prog = cp.reordered(p)
    goal = agoal(q)
    entries = ssup(goal, prog, cp.mapping)
    goal_vars = variables(q)
    for leaf in derivations(goal, prog, prune_cycles=False, max_depth=12):
        if leaf.status != SUCCESS:
            continue
        answer = {v: t for v, t in zip(goal_vars, leaf.node.answer) if t != v}
        assert any(more_general(e.answer, e.support, answer, leaf.support, goal_vars) for e in entries)
