"""Annotated goals, annotated resolution and acyclic derivation enumeration.

Each literal of a goal carries the atoms it was derived from (most
recent first).  A goal is cyclic when a positive literal reappears in its
own annotation; acyclic enumeration cuts such branches off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

from .errors import DerivationError, LimitExceeded, NotCallSafe
from .patterns import check_goal_call_safe
from .terms import (
    Atom, Literal, Program, Rule, Var, apply, format_atom, format_literal,
    is_ground, standardize_apart, unify, unify_terms, variables,
)

DEFAULT_MAX_STEPS = 2_000_000

SUCCESS = "SUCCESS"
CYCLIC = "CYCLIC"
FAIL = "FAIL"
CUTOFF = "CUTOFF"


@dataclass(frozen=True)
class ALiteral:
    literal: Literal
    annotation: tuple = ()

    @property
    def positive(self) -> bool:
        return self.literal.positive

    @property
    def atom(self) -> Atom:
        return self.literal.atom

    def substitute(self, s):
        return ALiteral(apply(s, self.literal), tuple(apply(s, a) for a in self.annotation))

    def vars_into(self, acc: dict) -> None:
        for v in variables(self.literal):
            acc.setdefault(v, None)
        for a in self.annotation:
            for v in variables(a):
                acc.setdefault(v, None)

    def is_cyclic(self) -> bool:
        return self.literal.positive and self.literal.atom in self.annotation

    def __str__(self):
        ann = ",".join(format_atom(a) for a in self.annotation)
        return f"{format_literal(self.literal)}⟨{ann}⟩"


AGoal = tuple  # of ALiteral


def agoal(*items) -> AGoal:
    """Build an a-goal from atoms/literals with empty annotations."""
    out = []
    for x in items:
        if isinstance(x, ALiteral):
            out.append(x)
        elif isinstance(x, Atom):
            out.append(ALiteral(Literal(x)))
        else:
            out.append(ALiteral(x))
    return tuple(out)


def format_goal(goal: AGoal) -> str:
    return ", ".join(str(x) for x in goal) if goal else "□"


def is_cyclic(goal: AGoal) -> bool:
    return any(x.is_cyclic() for x in goal)


def selected_index(goal: AGoal) -> Optional[int]:
    """Position of the leftmost positive a-literal."""
    for i, x in enumerate(goal):
        if x.positive:
            return i
    return None


def annotated_resolvent(goal: AGoal, rule: Rule) -> Optional[tuple]:
    """Resolve the leftmost positive a-literal of ``goal`` with ``rule``.

    ``rule`` must already be standardized apart from the goal.  Returns
    ``(resolvent, mgu)`` or None when the head does not unify.
    """
    i = selected_index(goal)
    if i is None:
        raise DerivationError("goal has no positive a-literal")
    sel = goal[i]
    theta = unify(sel.atom, rule.head)
    if theta is None:
        return None
    ann = (sel.atom, *sel.annotation)
    body = tuple(ALiteral(lit, ann) for lit in rule.body)
    return apply(theta, goal[:i] + body + goal[i + 1:]), theta


@dataclass(frozen=True)
class ExternalModel:
    """Predicates whose truth is read from a fixed set of ground atoms."""

    preds: frozenset
    atoms: frozenset

    def matching(self, atom: Atom) -> list[Atom]:
        return sorted((a for a in self.atoms if a.key == atom.key), key=format_atom)


@dataclass
class Node:
    goal: AGoal
    answer: tuple
    depth: int
    parent: Optional["Node"] = None
    rule: Optional[int] = None  # program rule index, -1 for builtin/external steps
    mgu: Mapping = field(default_factory=dict)

    def path(self) -> list["Node"]:
        out = []
        node = self
        while node is not None:
            out.append(node)
            node = node.parent
        return out[::-1]


@dataclass(frozen=True)
class Leaf:
    node: Node
    status: str
    support: frozenset = frozenset()
    note: str = ""


@dataclass(frozen=True)
class SupportEntry:
    answer: Mapping  # Var -> ground term, restricted to the initial goal's variables
    support: frozenset  # ground negative Literals
    trace: tuple = ()  # (rule index, mgu) per step

    def key(self):
        return (tuple(sorted(self.answer.items(), key=lambda kv: kv[0].name)), self.support)


def _finish(goal: AGoal, external: Optional[ExternalModel]) -> tuple[Optional[frozenset], str]:
    """Evaluate builtin and external negatives of a success goal."""
    support = set()
    for x in goal:
        lit = x.literal
        a = lit.atom
        if a.is_builtin:
            if not is_ground(a):
                raise DerivationError(f"non-ground builtin {format_literal(lit)} at success")
            if a.args[0] == a.args[1]:
                return None, f"{format_literal(lit)} is false"
            continue
        if not is_ground(a):
            raise DerivationError(f"non-ground support literal {format_literal(lit)}")
        if external is not None and a.key in external.preds:
            if a in external.atoms:
                return None, f"{format_literal(lit)} is false in the external model"
            continue
        support.add(lit)
    return frozenset(support), ""


def derivations(goal0: AGoal, program: Program, *, prune_cycles: bool = True,
                max_depth: Optional[int] = None, external: Optional[ExternalModel] = None,
                max_steps: Optional[int] = DEFAULT_MAX_STEPS) -> Iterator[Leaf]:
    """Depth-first enumeration of the a-derivation tree of ``goal0``.

    Yields one :class:`Leaf` per branch end.  Rules are tried in program
    order.  With ``prune_cycles`` a branch ends as CYCLIC at the first
    cyclic goal; ``max_depth`` bounds resolution steps (CUTOFF leaves).
    """
    goal_vars = tuple(variables(goal0))
    stack = [(Node(tuple(goal0), goal_vars, 0), False)]
    counter = 1
    steps = 0
    while stack:
        node, cyclic = stack.pop()
        if cyclic:
            yield Leaf(node, CYCLIC)
            continue
        goal = node.goal
        i = selected_index(goal)
        if i is None:
            support, note = _finish(goal, external)
            if support is None:
                yield Leaf(node, FAIL, note=note)
            else:
                yield Leaf(node, SUCCESS, support)
            continue
        if max_depth is not None and node.depth >= max_depth:
            yield Leaf(node, CUTOFF)
            continue
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise LimitExceeded(f"derivation step limit of {max_steps} exceeded")

        sel = goal[i]
        children = []
        if sel.atom.is_builtin:
            theta = unify_terms([sel.atom.args])
            if theta is not None:
                children.append((-1, theta, apply(theta, goal[:i] + goal[i + 1:])))
        elif external is not None and sel.atom.key in external.preds:
            for fact in external.matching(sel.atom):
                theta = unify(sel.atom, fact)
                if theta is not None:
                    children.append((-1, theta, apply(theta, goal[:i] + goal[i + 1:])))
        else:
            avoid: dict = {}
            for x in goal:
                x.vars_into(avoid)
            for t in node.answer:
                for v in variables(t):
                    avoid.setdefault(v, None)
            for ri, rule in enumerate(program.rules):
                if rule.head.key != sel.atom.key:
                    continue
                fresh, k = standardize_apart(rule, avoid, counter)
                res = annotated_resolvent(goal, fresh)
                if res is not None:
                    counter = k + 1
                    children.append((ri, res[1], res[0]))
        if not children:
            yield Leaf(node, FAIL, note=f"no clause head unifies with {format_atom(sel.atom)}")
            continue
        for ri, theta, new_goal in reversed(children):
            child = Node(new_goal, apply(theta, node.answer), node.depth + 1, node, ri, theta)
            stack.append((child, prune_cycles and is_cyclic(new_goal)))


def _entry(leaf: Leaf, goal_vars: Sequence[Var]) -> SupportEntry:
    answer = {v: t for v, t in zip(goal_vars, leaf.node.answer) if t != v}
    for v, t in answer.items():
        if not is_ground(t):
            raise DerivationError(f"answer for {v} is not ground: {t}")
    trace = tuple((n.rule, n.mgu) for n in leaf.node.path()[1:])
    return SupportEntry(answer, leaf.support, trace)


def ssup(goal0: AGoal, program: Program, mapping: Optional[Mapping] = None, *,
         external: Optional[ExternalModel] = None,
         max_steps: Optional[int] = DEFAULT_MAX_STEPS) -> list[SupportEntry]:
    """Answer/support pairs of all successful acyclic a-derivations of ``goal0``.

    ``program`` must already have its bodies in call-safe order for
    ``mapping``.  Without a mapping no call-safety check is made (fine
    for finite ground programs).  Results are deduplicated on
    (answer, support) and kept in discovery order.
    """
    goal0 = agoal(*goal0)
    if mapping is not None and not check_goal_call_safe(goal0, mapping):
        raise NotCallSafe(f"goal not call-safe: {format_goal(goal0)}")
    goal_vars = variables(goal0)
    out: dict = {}
    for leaf in derivations(goal0, program, external=external, max_steps=max_steps):
        if leaf.status == SUCCESS:
            entry = _entry(leaf, goal_vars)
            out.setdefault(entry.key(), entry)
    return list(out.values())
