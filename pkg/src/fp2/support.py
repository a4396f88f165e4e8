"""The support subprogram S(P, Q): a finite ground program answering Q."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .derivation import DEFAULT_MAX_STEPS, ExternalModel, agoal, ssup
from .errors import NotCallSafe
from .patterns import CallPattern, selected
from .terms import Atom, Program, Rule, apply, format_atom, format_literal, format_rule, is_ground


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple

    def __post_init__(self):
        for r in self.rules:
            if not is_ground(r):
                raise ValueError(f"non-ground rule {r}")
            if any(lit.positive for lit in r.body):
                raise ValueError(f"positive body literal in {r}")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def index(self) -> dict:
        out: dict = {}
        for r in self.rules:
            out.setdefault(r.head, []).append(r)
        return out

    def heads(self) -> list[Atom]:
        return list(dict.fromkeys(r.head for r in self.rules))

    def to_program(self) -> Program:
        return Program(self.rules)

    def text(self) -> str:
        return "".join(format_rule(r) + "\n" for r in self.rules)


def _support_rule(head: Atom, support: frozenset) -> Rule:
    return Rule(head, tuple(sorted(support, key=format_literal)))


def support_subprogram(program: Program, pattern: Optional[CallPattern], query: Atom, *,
                       external: Optional[ExternalModel] = None,
                       max_steps: Optional[int] = DEFAULT_MAX_STEPS) -> GroundProgram:
    """Worklist construction of S(P, Q), FIFO order.

    ``program`` is the original program; its bodies are permuted by the
    certificate here.  ``pattern=None`` is only meant for finite ground
    programs, where no certificate is needed.
    """
    if pattern is not None:
        if not is_ground(selected(query, pattern.mapping)):
            raise NotCallSafe(f"query not call-safe: selected arguments of {format_atom(query)} are not ground")
        program = pattern.reordered(program)
        mapping = pattern.mapping
    else:
        mapping = None

    cache: dict = {}

    def supports(atom: Atom):
        if atom not in cache:
            cache[atom] = ssup(agoal(atom), program, mapping, external=external, max_steps=max_steps)
        return cache[atom]

    todo: deque = deque()
    queued: set = set()
    for entry in supports(query):
        pair = (apply(entry.answer, query), entry.support)
        if pair not in queued:
            queued.add(pair)
            todo.append(pair)

    done: set = set()
    rules = []
    while todo:
        pair = todo.popleft()
        queued.discard(pair)
        done.add(pair)
        head, support = pair
        rules.append(_support_rule(head, support))
        for lit in sorted(support, key=format_literal):
            b = lit.atom
            for entry in supports(b):
                nxt = (b, entry.support)
                if nxt not in done and nxt not in queued:
                    queued.add(nxt)
                    todo.append(nxt)
    return GroundProgram(tuple(rules))
