"""Term-size norm and the three norm-based comparison relations.

``compare(t, u)`` decides, by occurrence counting only, whether a term
vector is strictly smaller, never larger, or almost never larger than
another under every grounding substitution.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .terms import Fn, Term, Var


def _as_vec(t) -> Sequence[Term]:
    if isinstance(t, (Var, Fn)):
        return (t,)
    return tuple(t)


def count_symbols(t) -> tuple[int, Counter]:
    """Return (norm, variable-occurrence counter) for a term vector."""
    size = 0
    var_counts: Counter = Counter()
    stack = list(_as_vec(t))
    while stack:
        x = stack.pop()
        size += 1
        if isinstance(x, Var):
            var_counts[x] += 1
        else:
            stack.extend(x.args)
    return size, var_counts


def norm(t) -> int:
    """Number of variable and function-symbol occurrences in ``t``."""
    return count_symbols(t)[0]


def nocc(symbol: Union[Var, str, tuple], t) -> int:
    """Occurrences of a variable or functor in ``t``.

    ``symbol`` is a :class:`Var`, a functor name (any arity), or a
    ``(name, arity)`` pair.
    """
    if isinstance(symbol, tuple):
        name, arity = symbol
    else:
        name, arity = symbol, None
    n = 0
    stack = list(_as_vec(t))
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            n += x == symbol
        else:
            if x.functor == name and (arity is None or len(x.args) == arity):
                n += not isinstance(symbol, Var)
            stack.extend(x.args)
    return n


@dataclass(frozen=True)
class CompareResult:
    strict_less: bool
    less_eq: bool
    almost_never_larger: bool

    def symbol(self) -> str:
        if self.strict_less:
            return "<"
        if self.less_eq:
            return "<="
        if self.almost_never_larger:
            return "<~"
        return "?"


def compare(t: Iterable[Term], u: Iterable[Term]) -> CompareResult:
    size_t, occ_t = count_symbols(t)
    size_u, occ_u = count_symbols(u)
    variables = set(occ_t) | set(occ_u)
    bounded = all(occ_t[x] <= occ_u[x] for x in variables)
    strict = size_t < size_u and bounded
    less_eq = size_t <= size_u and bounded
    dominated = all(occ_t[x] < occ_u[x] for x in variables)
    return CompareResult(strict, less_eq, less_eq or dominated)
