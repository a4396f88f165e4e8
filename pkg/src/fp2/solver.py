"""Stable models of finite ground programs, query answering and composition."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .derivation import ExternalModel
from .errors import Fp2Error, LimitExceeded, NotGround
from .patterns import CallPattern
from .support import GroundProgram, support_subprogram
from .terms import Atom, Literal, Program, Rule, apply, format_atom, format_pred, is_ground, match

DEFAULT_ATOM_LIMIT = 24
CREDULOUS = "credulous"
SKEPTICAL = "skeptical"


def default_atom_limit() -> int:
    raw = os.environ.get("FP2_ATOM_LIMIT")
    return int(raw) if raw else DEFAULT_ATOM_LIMIT


def _rules(p) -> tuple:
    return tuple(p.rules) if hasattr(p, "rules") else tuple(p)


def _check_ground(rules: Iterable[Rule]) -> None:
    for r in rules:
        if not is_ground(r):
            raise NotGround(f"non-ground rule: {r}")


def universe(p) -> list[Atom]:
    seen: dict = {}
    for r in _rules(p):
        seen.setdefault(r.head, None)
        for lit in r.body:
            seen.setdefault(lit.atom, None)
    return list(seen)


def gl_reduct(p, model: Iterable[Atom]) -> tuple:
    """Drop rules blocked by ``model``; strip negative literals from the rest."""
    rules = _rules(p)
    _check_ground(rules)
    m = set(model)
    out = []
    for r in rules:
        if any(not lit.positive and lit.atom in m for lit in r.body):
            continue
        out.append(Rule(r.head, tuple(lit for lit in r.body if lit.positive)))
    return tuple(out)


def least_model(p) -> frozenset:
    rules = _rules(p)
    if any(not lit.positive for r in rules for lit in r.body):
        raise ValueError("least_model needs a positive program")
    # counter-based forward chaining
    waiting: dict = {}
    missing = []
    model: set = set()
    queue = []
    for i, r in enumerate(rules):
        body = set(lit.atom for lit in r.body)
        missing.append(len(body))
        for a in body:
            waiting.setdefault(a, []).append(i)
        if not body:
            queue.append(r.head)
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in waiting.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i].head)
    return frozenset(model)


def is_stable(p, model: Iterable[Atom]) -> bool:
    m = frozenset(model)
    return least_model(gl_reduct(p, m)) == m


def _sort_models(models) -> list[frozenset]:
    return sorted(models, key=lambda m: sorted(format_atom(a) for a in m))


@dataclass(frozen=True)
class StableModelSet:
    models: tuple
    universe: tuple

    def __iter__(self):
        return iter(self.models)

    def __len__(self):
        return len(self.models)


def stable_models(p, atom_limit: Optional[int] = None) -> StableModelSet:
    """All stable models by branching on negatively-used head atoms.

    A model is fixed by which atoms under ``not`` it contains, and only
    rule heads can be true.  Each partial assignment to those atoms gives
    a lower bound (rules whose negative atoms are all assigned false) and
    an upper bound (rules not blocked by an atom assigned true); branches
    whose assignment contradicts the bounds are cut, and atoms decided by
    the bounds are propagated before branching further.
    """
    rules = _rules(p)
    _check_ground(rules)
    limit = default_atom_limit() if atom_limit is None else atom_limit
    atoms = universe(rules)
    if len(atoms) > limit:
        raise LimitExceeded(f"atom limit exceeded: {len(atoms)} atoms > {limit}")
    heads = {r.head for r in rules}
    negs = list(dict.fromkeys(lit.atom for r in rules for lit in r.body if not lit.positive))
    pos_part = [(r.head, tuple(l.atom for l in r.body if l.positive),
                 tuple(l.atom for l in r.body if not l.positive)) for r in rules]

    def bounds(true: set, false: set):
        lower = least_model([Rule(h, tuple(Literal(a) for a in pos)) for h, pos, neg in pos_part
                             if all(a in false for a in neg)])
        upper = least_model([Rule(h, tuple(Literal(a) for a in pos)) for h, pos, neg in pos_part
                             if not any(a in true for a in neg)])
        return lower, upper

    models = set()

    def search(true: set, false: set):
        while True:
            lower, upper = bounds(true, false)
            if any(a in lower for a in false) or any(a not in upper for a in true):
                return
            changed = False
            for a in negs:
                if a in true or a in false:
                    continue
                if a not in upper:
                    false.add(a)
                    changed = True
                elif a in lower:
                    true.add(a)
                    changed = True
            if not changed:
                break
        open_atoms = [a for a in negs if a not in true and a not in false]
        if not open_atoms:
            if lower == upper:
                models.add(lower)
            return
        a = open_atoms[0]
        search(true | {a}, set(false))
        search(set(true), false | {a})

    search(set(), {a for a in negs if a not in heads})
    return StableModelSet(tuple(_sort_models(models)), tuple(atoms))


def stable_models_bruteforce(p) -> list[frozenset]:
    """Reference enumeration over every subset of the universe."""
    rules = _rules(p)
    atoms = universe(rules)
    out = []
    for bits in range(1 << len(atoms)):
        m = frozenset(a for i, a in enumerate(atoms) if bits >> i & 1)
        if is_stable(rules, m):
            out.append(m)
    return _sort_models(out)


# ----------------------------------------------------------------- queries

@dataclass(frozen=True)
class QueryResult:
    query: Atom
    mode: str
    answers: tuple  # of dict Var -> term
    consistent: bool
    models: tuple = ()
    program: Optional[GroundProgram] = None

    @property
    def holds(self) -> bool:
        return bool(self.answers) and self.consistent


def _answers_in(query: Atom, atoms: Iterable[Atom]) -> dict:
    """Map each instance of ``query`` among ``atoms`` to its substitution."""
    out = {}
    for a in atoms:
        s = match(query, a)
        if s is not None:
            out[a] = {v: t for v, t in s.items() if t != v}
    return out


def _sorted_answers(query: Atom, found: Mapping) -> tuple:
    return tuple(found[a] for a in sorted(found, key=format_atom))


def answers_from_models(query: Atom, models: Sequence[frozenset], mode: str,
                        candidates: Iterable[Atom] = ()) -> tuple[tuple, bool]:
    if mode not in (CREDULOUS, SKEPTICAL):
        raise ValueError(f"unknown reasoning mode {mode!r}")
    if not models:
        if mode == SKEPTICAL:
            return _sorted_answers(query, _answers_in(query, candidates)), False
        return (), False
    if mode == CREDULOUS:
        atoms = set().union(*models)
    else:
        atoms = frozenset.intersection(*models)
    return _sorted_answers(query, _answers_in(query, atoms)), True


def answer_query(program: Program, pattern: CallPattern, query: Atom, mode: str = CREDULOUS,
                 atom_limit: Optional[int] = None) -> QueryResult:
    sp = support_subprogram(program, pattern, query)
    models = stable_models(sp, atom_limit).models
    answers, consistent = answers_from_models(query, models, mode, sp.heads())
    return QueryResult(query, mode, answers, consistent, models, sp)


# ------------------------------------------------------------- composition

def defined(p) -> list:
    return list(dict.fromkeys(r.head.key for r in _rules(p)))


def called(p) -> list:
    return list(dict.fromkeys(l.key for r in _rules(p) for l in r.body if not l.atom.is_builtin))


DEPENDS = "depends"
INDEPENDENT = "independent"
NEITHER = "neither"


@dataclass(frozen=True)
class CompositionRelation:
    kind: str
    witness: Optional[tuple] = None

    def __str__(self):
        if self.witness is None:
            return self.kind
        return f"{self.kind} ({format_pred(self.witness)})"


def composition_relation(p1, p2) -> CompositionRelation:
    d1, d2 = defined(p1), defined(p2)
    c1, c2 = called(p1), called(p2)
    clash = [p for p in d1 if p in d2] or [p for p in d1 if p in c2]
    if clash:
        return CompositionRelation(NEITHER, clash[0])
    if any(p in d2 for p in c1):
        return CompositionRelation(DEPENDS)
    return CompositionRelation(INDEPENDENT)


@dataclass(frozen=True)
class ComposedResult:
    query: Atom
    mode: str
    relation: CompositionRelation
    answers: tuple
    consistent: bool
    branches: tuple = ()  # (model of Q, QueryResult)


def compose_query(program: Program, pattern: CallPattern, lower, query: Atom,
                  mode: str = CREDULOUS, atom_limit: Optional[int] = None) -> ComposedResult:
    """Answer ``query`` over ``program`` united with the finite ground ``lower``.

    Splitting on ``lower``: for each of its stable models the predicates
    it defines are read off that model while grounding ``program``.
    """
    rel = composition_relation(program, lower)
    if rel.kind == NEITHER:
        raise Fp2Error(f"programs are neither dependent nor independent: {rel}")
    lower_models = stable_models(lower, atom_limit).models
    external_preds = frozenset(defined(lower))
    branches = []
    for m in lower_models:
        ext = ExternalModel(external_preds, m)
        sp = support_subprogram(program, pattern, query, external=ext)
        models = stable_models(sp, atom_limit).models
        answers, consistent = answers_from_models(query, models, mode, sp.heads())
        branches.append((m, QueryResult(query, mode, answers, consistent, models, sp)))

    live = [res for _, res in branches if res.consistent]
    if not live:
        return ComposedResult(query, mode, rel, (), False, tuple(branches))
    keyed = [{format_atom(apply(a, query)): a for a in res.answers} for res in live]
    if mode == CREDULOUS:
        merged = {}
        for k in keyed:
            merged.update(k)
    else:
        common = set(keyed[0]).intersection(*keyed[1:])
        merged = {k: keyed[0][k] for k in common}
    answers = tuple(merged[k] for k in sorted(merged))
    return ComposedResult(query, mode, rel, answers, True, tuple(branches))
