"""Predicate dependency graph, strongly connected components, odd cycles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .terms import Program

Pred = tuple  # (name, arity)


@dataclass(frozen=True)
class Edge:
    src: Pred
    dst: Pred
    negative: bool
    rule: int  # index into the program's rules
    position: int  # 0-based body position in that rule

    @property
    def sign(self) -> str:
        return "-" if self.negative else "+"


@dataclass(frozen=True)
class PredGraph:
    vertices: tuple
    edges: tuple

    def successors(self) -> dict:
        out: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.dst not in out[e.src]:
                out[e.src].append(e.dst)
        return out


def build_pred_graph(program: Program) -> PredGraph:
    edges = []
    for ri, rule in enumerate(program.rules):
        for pos, lit in enumerate(rule.body):
            if lit.atom.is_builtin:
                continue
            edges.append(Edge(rule.head.key, lit.key, not lit.positive, ri, pos))
    return PredGraph(tuple(program.predicates()), tuple(edges))


def tarjan(vertices: Sequence[Hashable], successors: Mapping) -> list[list]:
    """Iterative Tarjan; components come out callees-first."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors.get(w, ()))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    result.append(comp)
    return result


@dataclass(frozen=True)
class SccPartition:
    components: tuple  # of frozensets, callees before callers
    lookup: Mapping

    def component_of(self, pred: Pred) -> int:
        return self.lookup[pred]

    def same(self, p: Pred, q: Pred) -> bool:
        return p in self.lookup and q in self.lookup and self.lookup[p] == self.lookup[q]


def sccs(g: PredGraph) -> SccPartition:
    comps = [frozenset(c) for c in tarjan(g.vertices, g.successors())]
    lookup = {v: i for i, c in enumerate(comps) for v in c}
    return SccPartition(tuple(comps), lookup)


def component_has_odd_cycle(g: PredGraph, component: Iterable[Pred], excluded: Iterable[Edge] = ()) -> bool:
    """Does the component, minus ``excluded``, contain an odd-negative cycle?

    Works on the parity product: (u, b) -> (v, b xor negative).  A closed
    walk with odd parity through v exists iff (v, 0) and (v, 1) share a
    strongly connected component of the product.
    """
    comp = frozenset(component)
    if comp not in set(sccs(g).components):
        raise ValueError(f"not a component of the graph: {sorted(comp)}")
    skip = set(excluded)
    succ: dict = {}
    for v in comp:
        succ[(v, 0)] = []
        succ[(v, 1)] = []
    for e in g.edges:
        if e in skip or e.src not in comp or e.dst not in comp:
            continue
        for b in (0, 1):
            succ[(e.src, b)].append((e.dst, b ^ e.negative))
    for scc in tarjan(list(succ), succ):
        members = set(scc)
        if any((v, 0) in members and (v, 1) in members for v, _ in scc):
            return True
    return False
