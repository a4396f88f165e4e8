"""Selection indexes, recursion patterns, call-safety and the FP2 search.

Selection indexes are sorted tuples of 1-based argument positions.  A
selection mapping is a dict from predicate key ``(name, arity)`` to such
a tuple; ``=`` never appears in a mapping.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .depgraph import PredGraph, SccPartition, build_pred_graph, component_has_odd_cycle, sccs
from .errors import BudgetExceeded, PatternError
from .norms import compare
from .terms import Atom, Literal, Program, Rule, format_pred, variables

LITERAL = "literal"
RELAXED = "relaxed"
MODES = (LITERAL, RELAXED)

DEFAULT_BUDGET = 1 << 20


def apply_selection(x, idx: Sequence[int]) -> tuple:
    atom = x.atom if isinstance(x, Literal) else x
    for i in idx:
        if not 1 <= i <= atom.arity:
            raise PatternError(f"selection index {set(idx)} does not fit {format_pred(atom.key)}")
    return tuple(atom.args[i - 1] for i in idx)


def is_complete(idx: Sequence[int], arity: int) -> bool:
    return len(idx) == arity


def selected(atom: Atom, mapping: Mapping) -> tuple:
    return apply_selection(atom, mapping.get(atom.key, ()))


def contains(tau: Mapping, pi: Mapping) -> bool:
    return all(set(pi.get(p, ())) <= set(tau.get(p, ())) for p in set(tau) | set(pi))


# -------------------------------------------------------- rule classification

def _recursive_literals(rule: Rule, scc: SccPartition) -> list[tuple[int, Literal]]:
    h = rule.head.key
    return [
        (i, lit)
        for i, lit in enumerate(rule.body)
        if not lit.atom.is_builtin and scc.same(lit.key, h)
    ]


def is_decreasing(rule: Rule, pi: Mapping, scc: SccPartition) -> bool:
    head_sel = selected(rule.head, pi)
    return all(
        compare(selected(lit.atom, pi), head_sel).strict_less
        for _, lit in _recursive_literals(rule, scc)
    )


def is_almost_never_increasing(rule: Rule, pi: Mapping, scc: SccPartition) -> bool:
    head = rule.head
    head_sel = selected(head, pi)
    for _, lit in _recursive_literals(rule, scc):
        if not (is_complete(pi.get(lit.key, ()), lit.atom.arity) and is_complete(pi.get(head.key, ()), head.arity)):
            return False
        if not compare(selected(lit.atom, pi), head_sel).almost_never_larger:
            return False
    return True


def classify_rule(rule: Rule, pi: Mapping, scc: SccPartition) -> str:
    """'decreasing', 'ani' (almost never increasing) or 'neither'.

    A rule that is both is reported as decreasing.
    """
    if is_decreasing(rule, pi, scc):
        return "decreasing"
    if is_almost_never_increasing(rule, pi, scc):
        return "ani"
    return "neither"


def strictly_decreasing_edges(program: Program, graph: PredGraph, pi: Mapping) -> set:
    out = set()
    for e in graph.edges:
        rule = program.rules[e.rule]
        lit = rule.body[e.position]
        if compare(selected(lit.atom, pi), selected(rule.head, pi)).strict_less:
            out.add(e)
    return out


def component_condition(program: Program, graph: PredGraph, scc: SccPartition, ci: int,
                        pi: Mapping, mode: str = LITERAL) -> Optional[int]:
    """Which recursion-pattern condition component ``ci`` meets (1, 2 or None)."""
    rules = [r for r in program.rules if scc.lookup.get(r.head.key) == ci]
    if all(is_decreasing(r, pi, scc) for r in rules):
        return 1
    if not all(is_almost_never_increasing(r, pi, scc) for r in rules):
        return None
    excluded = strictly_decreasing_edges(program, graph, pi) if mode == RELAXED else ()
    if component_has_odd_cycle(graph, scc.components[ci], excluded):
        return None
    return 2


def check_recursion_pattern(pi: Mapping, program: Program, mode: str = LITERAL) -> bool:
    graph = build_pred_graph(program)
    scc = sccs(graph)
    return all(
        component_condition(program, graph, scc, ci, pi, mode) is not None
        for ci in range(len(scc.components))
    )


# ---------------------------------------------------------------- call-safety

def _lit(x) -> Literal:
    return x.literal if hasattr(x, "literal") else x


def literal_ready(lit: Literal, bound: set, mapping: Mapping) -> bool:
    """Is ``lit`` callable once the variables in ``bound`` are bound?

    Negative literals need all their variables bound; a positive ``s=t``
    needs one side bound (unification then grounds the other); any other
    positive literal needs its selected arguments bound.
    """
    a = lit.atom
    if not lit.positive:
        return all(v in bound for v in variables(a))
    if a.is_builtin:
        return any(all(v in bound for v in variables(side)) for side in a.args)
    return all(v in bound for v in variables(selected(a, mapping)))


def check_goal_call_safe(goal: Iterable, mapping: Mapping) -> bool:
    bound: set = set()
    for x in goal:
        lit = _lit(x)
        if not literal_ready(lit, bound, mapping):
            return False
        if lit.positive:
            bound.update(variables(lit.atom))
    return True


def is_rule_call_safe(rule: Rule, mapping: Mapping) -> bool:
    bound = set(variables(selected(rule.head, mapping)))
    if not set(variables(rule.head)) <= bound | set(variables(rule.body)):
        return False
    for lit in rule.body:
        if not literal_ready(lit, bound, mapping):
            return False
        if lit.positive:
            bound.update(variables(lit.atom))
    return True


def reorder_body(rule: Rule, mapping: Mapping) -> Optional[tuple]:
    """A call-safe body order as a tuple of 0-based positions, or None.

    Greedy: emit the first not-yet-placed literal that is ready.  Placing
    a positive literal only grows the bound set, so greed never blocks a
    literal that some other order could place.
    """
    if not set(variables(rule.head)) <= set(variables(selected(rule.head, mapping))) | set(variables(rule.body)):
        return None
    bound = set(variables(selected(rule.head, mapping)))
    remaining = list(range(len(rule.body)))
    order = []
    while remaining:
        for i in remaining:
            lit = rule.body[i]
            if literal_ready(lit, bound, mapping):
                break
        else:
            return None
        remaining.remove(i)
        order.append(i)
        if lit.positive:
            bound.update(variables(lit.atom))
    return tuple(order)


def permute_rule(rule: Rule, order: Sequence[int]) -> Rule:
    return Rule(rule.head, tuple(rule.body[i] for i in order))


# ---------------------------------------------------------- certificates

@dataclass(frozen=True)
class CallPattern:
    mapping: Mapping
    recursion_pattern: Mapping
    body_orders: tuple  # one tuple of 0-based positions per rule
    mode: str = LITERAL

    def reordered(self, program: Program) -> Program:
        return Program(tuple(permute_rule(r, o) for r, o in zip(program.rules, self.body_orders)))

    def __str__(self):
        return format_mapping(self.mapping)


@dataclass(frozen=True)
class Fp2Verdict:
    is_fp2: bool
    certificate: Optional[CallPattern] = None
    reason: str = ""
    budget_exceeded: bool = False
    candidates_tested: int = 0


def format_index(idx: Sequence[int]) -> str:
    return "{" + ",".join(str(i) for i in idx) + "}"


def format_mapping(mapping: Mapping, preds: Optional[Iterable] = None) -> str:
    keys = list(preds) if preds is not None else list(mapping)
    return ";".join(f"{format_pred(p)}={format_index(mapping.get(p, ()))}" for p in keys)


_ENTRY_RE = re.compile(r"^\s*([a-z0-9_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*=\s*\{([\d\s,]*)\}\s*$")


def parse_mapping(text: str, program: Optional[Program] = None) -> dict:
    """Parse ``"p/3={1,3};q/1={1}"``.

    With a program, predicates the text leaves out get the empty index
    and unknown predicates are rejected.
    """
    out: dict = {}
    for chunk in filter(str.strip, text.split(";")):
        m = _ENTRY_RE.match(chunk)
        if not m:
            raise PatternError(f"malformed selection entry {chunk.strip()!r}")
        key = (m.group(1), int(m.group(2)))
        idx = tuple(sorted({int(x) for x in m.group(3).replace(",", " ").split()}))
        if any(not 1 <= i <= key[1] for i in idx):
            raise PatternError(f"position out of range in {chunk.strip()!r}")
        if key in out:
            raise PatternError(f"duplicate entry for {format_pred(key)}")
        out[key] = idx
    if program is not None:
        known = program.predicates()
        unknown = [k for k in out if k not in known]
        if unknown:
            raise PatternError(f"unknown predicate {format_pred(unknown[0])}")
        out = {k: out.get(k, ()) for k in known}
    return out


def validate_call_pattern(program: Program, cp: CallPattern) -> list[str]:
    """Re-check every certificate obligation; returns the failures."""
    problems = []
    preds = program.predicates()
    if set(cp.mapping) != set(preds):
        problems.append("mapping is not total on program predicates")
    if not contains(cp.mapping, cp.recursion_pattern):
        problems.append("mapping does not contain the recursion pattern")
    if not check_recursion_pattern(cp.recursion_pattern, program, cp.mode):
        problems.append("contained mapping is not a recursion pattern")
    if len(cp.body_orders) != len(program.rules):
        problems.append("wrong number of body orders")
    for i, (r, order) in enumerate(zip(program.rules, cp.body_orders)):
        if sorted(order) != list(range(len(r.body))):
            problems.append(f"rule {i + 1}: body order is not a permutation")
        elif not is_rule_call_safe(permute_rule(r, order), cp.mapping):
            problems.append(f"rule {i + 1}: not call-safe")
    return problems


# ---------------------------------------------------------------- search

def _subsets(slots: Sequence[tuple]) -> Iterable[dict]:
    """All selection mappings over ``slots`` ascending by size, then lexicographic."""
    for k in range(len(slots) + 1):
        for combo in itertools.combinations(slots, k):
            m: dict = {}
            for pred, pos in combo:
                m.setdefault(pred, []).append(pos)
            yield {p: tuple(v) for p, v in m.items()}


def _slots(preds: Iterable) -> list[tuple]:
    return [(p, i) for p in preds for i in range(1, p[1] + 1)]


class _Search:
    def __init__(self, program: Program, mode: str, budget: int, goal: Sequence = ()):
        self.goal = tuple(goal)
        if mode not in MODES:
            raise ValueError(f"unknown odd-cycle mode {mode!r}")
        self.program = program
        self.mode = mode
        self.budget = budget
        self.tested = 0
        self.preds = program.predicates()
        self.graph = build_pred_graph(program)
        self.scc = sccs(self.graph)
        order = {p: i for i, p in enumerate(self.preds)}
        self.comp_preds = [sorted(c, key=order.__getitem__) for c in self.scc.components]
        self._rule_cache: dict = {}
        self.rule_preds = [
            tuple(dict.fromkeys(a.key for a in (r.head, *(l.atom for l in r.body)) if not a.is_builtin))
            for r in program.rules
        ]

    def tick(self):
        self.tested += 1
        if self.tested > self.budget:
            raise BudgetExceeded(f"search budget of {self.budget} candidates exceeded")

    def component_candidates(self, ci: int) -> list[dict]:
        """Minimal sub-mappings on component ``ci`` meeting a recursion condition."""
        found: list[dict] = []
        for pi in _subsets(_slots(self.comp_preds[ci])):
            if any(contains(pi, f) for f in found):
                continue
            self.tick()
            full = {p: pi.get(p, ()) for p in self.comp_preds[ci]}
            if component_condition(self.program, self.graph, self.scc, ci, full, self.mode) is not None:
                found.append(full)
        return found

    def rule_order(self, ri: int, tau: Mapping) -> Optional[tuple]:
        key = (ri, tuple(tau.get(p, ()) for p in self.rule_preds[ri]))
        if key not in self._rule_cache:
            self._rule_cache[key] = reorder_body(self.program.rules[ri], tau)
        return self._rule_cache[key]

    def run(self) -> Fp2Verdict:
        candidates = []
        for ci in range(len(self.scc.components)):
            found = self.component_candidates(ci)
            if not found:
                names = ", ".join(format_pred(p) for p in self.comp_preds[ci])
                return Fp2Verdict(False, reason=f"no recursion pattern for component {{{names}}}",
                                  candidates_tested=self.tested)
            candidates.append(found)

        failures = [0] * len(self.program.rules)
        considered = 0
        for sub in _subsets(_slots(self.preds)):
            tau = {p: sub.get(p, ()) for p in self.preds}
            pi: dict = {}
            for found in candidates:
                match = next((c for c in found if contains(tau, c)), None)
                if match is None:
                    break
                pi.update(match)
            else:
                self.tick()
                if self.goal and not check_goal_call_safe(self.goal, tau):
                    continue
                considered += 1
                orders = []
                for ri in range(len(self.program.rules)):
                    order = self.rule_order(ri, tau)
                    if order is None:
                        failures[ri] += 1
                        break
                    orders.append(order)
                else:
                    cp = CallPattern(tau, pi, tuple(orders), self.mode)
                    return Fp2Verdict(True, cp, candidates_tested=self.tested)
        blocking = [i for i, n in enumerate(failures) if considered and n == considered]
        if self.goal and not considered:
            reason = "no candidate mapping makes the query call-safe"
        elif blocking:
            reason = f"rule {blocking[0] + 1} has no call-safe body order under any candidate mapping"
        else:
            reason = "no mapping both contains a recursion pattern and makes every rule call-safe"
        return Fp2Verdict(False, reason=reason, candidates_tested=self.tested)


def find_call_pattern(program: Program, mode: str = LITERAL, budget: int = DEFAULT_BUDGET,
                      goal: Sequence = ()) -> Fp2Verdict:
    """Generate-and-test search for a call pattern.

    Candidate mappings are tried ascending by number of selected
    positions.  A non-empty ``goal`` (atoms or literals) additionally
    requires the goal to be call-safe under the returned mapping.
    """
    goal = tuple(Literal(g) if isinstance(g, Atom) else g for g in goal)
    search = _Search(program, mode, budget, goal)
    try:
        return search.run()
    except BudgetExceeded as exc:
        return Fp2Verdict(False, reason=str(exc), budget_exceeded=True, candidates_tested=search.tested)


def all_call_patterns(program: Program, mode: str = LITERAL) -> list[dict]:
    """Every call pattern of ``program`` (exhaustive; small programs only)."""
    search = _Search(program, mode, budget=1 << 62)
    candidates = [search.component_candidates(ci) for ci in range(len(search.scc.components))]
    out = []
    for sub in _subsets(_slots(search.preds)):
        tau = {p: sub.get(p, ()) for p in search.preds}
        if not all(any(contains(tau, c) for c in found) for found in candidates):
            continue
        if all(search.rule_order(ri, tau) is not None for ri in range(len(program.rules))):
            out.append(tau)
    return out


def call_pattern_for(program: Program, tau: Mapping, mode: str = LITERAL) -> CallPattern:
    """Build a certificate around a user-supplied mapping, or raise PatternError."""
    search = _Search(program, mode, budget=1 << 62)
    tau = {p: tuple(sorted(tau.get(p, ()))) for p in search.preds}
    pi: dict = {}
    for ci in range(len(search.scc.components)):
        match = next((c for c in search.component_candidates(ci) if contains(tau, c)), None)
        if match is None:
            names = ", ".join(format_pred(p) for p in search.comp_preds[ci])
            raise PatternError(f"mapping contains no recursion pattern for component {{{names}}}")
        pi.update(match)
    orders = []
    for ri, rule in enumerate(program.rules):
        order = reorder_body(rule, tau)
        if order is None:
            raise PatternError(f"rule {ri + 1} ({rule}) cannot be made call-safe")
        orders.append(order)
    return CallPattern(tau, pi, tuple(orders), mode)
