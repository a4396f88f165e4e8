"""Terms, atoms, rules and programs, plus substitutions and unification.

Everything here is an immutable value.  Substitutions are plain dicts
mapping :class:`Var` to terms; the empty dict is the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

EQ = "="


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn:
    """Function application; constants are 0-ary applications."""

    functor: str
    args: tuple = ()

    def __post_init__(self):
        if not self.functor:
            raise ValueError("functor name must be non-empty")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        return format_term(self)


Term = Union[Var, Fn]

NIL = Fn("nil")


def cons(head: Term, tail: Term) -> Fn:
    return Fn("cons", (head, tail))


def make_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = cons(item, out)
    return out


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    @property
    def is_builtin(self) -> bool:
        return self.pred == EQ and len(self.args) == 2

    def __str__(self):
        return format_atom(self)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    @property
    def key(self) -> tuple[str, int]:
        return self.atom.key

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return format_literal(self)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple = ()

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self):
        return format_rule(self)


@dataclass(frozen=True)
class Program:
    rules: tuple = ()

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def predicates(self) -> list[tuple[str, int]]:
        """Predicate symbols in order of first occurrence, builtins excluded."""
        seen: dict[tuple[str, int], None] = {}
        for r in self.rules:
            for a in (r.head, *(lit.atom for lit in r.body)):
                if not a.is_builtin:
                    seen.setdefault(a.key, None)
        return list(seen)

    def functions(self) -> set[tuple[str, int]]:
        out: set[tuple[str, int]] = set()
        for r in self.rules:
            for a in (r.head, *(lit.atom for lit in r.body)):
                for t in a.args:
                    _collect_functions(t, out)
        return out

    @property
    def signature(self) -> dict[str, set]:
        return {"predicates": set(self.predicates()), "functions": self.functions()}

    def __str__(self):
        return format_program(self)


def _collect_functions(t: Term, out: set) -> None:
    if isinstance(t, Fn):
        out.add((t.functor, len(t.args)))
        for a in t.args:
            _collect_functions(a, out)


# ---------------------------------------------------------------- variables

def term_vars(t: Term, acc: Optional[dict] = None) -> dict:
    """Variables of ``t`` in first-occurrence order (as dict keys)."""
    if acc is None:
        acc = {}
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            acc.setdefault(x, None)
        else:
            stack.extend(reversed(x.args))
    return acc


def variables(x) -> list[Var]:
    """Ordered variables of a term, atom, literal, rule, or iterable thereof."""
    acc: dict = {}
    _vars_into(x, acc)
    return list(acc)


def _vars_into(x, acc: dict) -> None:
    if isinstance(x, (Var, Fn)):
        term_vars(x, acc)
    elif isinstance(x, Atom):
        for t in x.args:
            term_vars(t, acc)
    elif isinstance(x, Literal):
        _vars_into(x.atom, acc)
    elif isinstance(x, Rule):
        _vars_into(x.head, acc)
        for lit in x.body:
            _vars_into(lit, acc)
    elif hasattr(x, "vars_into"):
        x.vars_into(acc)
    else:
        for item in x:
            _vars_into(item, acc)


def is_ground(x) -> bool:
    if isinstance(x, Var):
        return False
    if isinstance(x, Fn):
        return all(is_ground(a) for a in x.args)
    return not variables(x)


# ------------------------------------------------------------ substitutions

Substitution = dict


def subst_term(t: Term, s: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if not t.args:
        return t
    return Fn(t.functor, tuple(subst_term(a, s) for a in t.args))


def apply(s: Mapping[Var, Term], x):
    """Apply ``s`` simultaneously to a term, atom, literal, rule or goal."""
    if not s:
        return x
    if isinstance(x, (Var, Fn)):
        return subst_term(x, s)
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(subst_term(a, s) for a in x.args))
    if isinstance(x, Literal):
        return Literal(apply(s, x.atom), x.positive)
    if isinstance(x, Rule):
        return Rule(apply(s, x.head), tuple(apply(s, lit) for lit in x.body))
    if hasattr(x, "substitute"):
        return x.substitute(s)
    if isinstance(x, tuple):
        return tuple(apply(s, item) for item in x)
    raise TypeError(f"cannot apply a substitution to {type(x).__name__}")


def compose(first: Mapping[Var, Term], then: Mapping[Var, Term]) -> dict:
    """The substitution equivalent to applying ``first`` and then ``then``."""
    out = {v: subst_term(t, then) for v, t in first.items()}
    for v, t in then.items():
        if v not in first:
            out[v] = t
    return {v: t for v, t in out.items() if t != v}


def restrict(s: Mapping[Var, Term], vs: Iterable[Var]) -> dict:
    return {v: s[v] for v in vs if v in s}


# -------------------------------------------------------------- unification

def occurs(v: Var, t: Term) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        if x == v:
            return True
        if isinstance(x, Fn):
            stack.extend(x.args)
    return False


def unify_terms(pairs: Iterable[tuple[Term, Term]]) -> Optional[dict]:
    """Robinson unification with occurs check.

    Returns an idempotent most general unifier, or None.  When two
    variables meet, the right-hand one is bound to the left-hand one, so
    unifying a goal atom with a rule head binds the rule's variables.
    """
    s: dict = {}
    todo = list(pairs)
    while todo:
        a, b = todo.pop()
        a = _walk(a, s)
        b = _walk(b, s)
        if a == b:
            continue
        if isinstance(b, Var):
            if occurs(b, _resolve(a, s)):
                return None
            s[b] = a
        elif isinstance(a, Var):
            if occurs(a, _resolve(b, s)):
                return None
            s[a] = b
        elif a.functor != b.functor or len(a.args) != len(b.args):
            return None
        else:
            todo.extend(zip(a.args, b.args))
    return {v: _resolve(t, s) for v, t in s.items()}


def _walk(t: Term, s: dict) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def _resolve(t: Term, s: dict) -> Term:
    t = _walk(t, s)
    if isinstance(t, Var) or not t.args:
        return t
    return Fn(t.functor, tuple(_resolve(a, s) for a in t.args))


def unify(a: Atom, b: Atom) -> Optional[dict]:
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    return unify_terms(zip(a.args, b.args))


def match_terms(pairs: Iterable[tuple[Term, Term]], s: Optional[dict] = None) -> Optional[dict]:
    """One-way matching: find ``s`` with ``pattern s == target`` for each pair."""
    s = dict(s or {})
    todo = list(pairs)
    while todo:
        p, t = todo.pop()
        if isinstance(p, Var):
            bound = s.get(p)
            if bound is None:
                s[p] = t
            elif bound != t:
                return None
        elif isinstance(t, Var) or p.functor != t.functor or len(p.args) != len(t.args):
            return None
        else:
            todo.extend(zip(p.args, t.args))
    return s


def match(pattern: Atom, target: Atom, s: Optional[dict] = None) -> Optional[dict]:
    if pattern.key != target.key:
        return None
    return match_terms(zip(pattern.args, target.args), s)


def rename_rule(r: Rule, mapping: Mapping[Var, Var]) -> Rule:
    return apply(mapping, r)


def standardize_apart(r: Rule, avoid: Iterable[Var], start: int = 1) -> tuple[Rule, int]:
    """Rename every variable of ``r`` by appending a numeric suffix.

    The suffix is the least ``k >= start`` for which no renamed variable
    is in ``avoid``.  Returns the renamed rule and the suffix used.
    """
    vs = variables(r)
    if not vs:
        return r, start
    avoid = avoid if isinstance(avoid, (set, frozenset, dict)) else set(avoid)
    k = start
    while True:
        mapping = {v: Var(f"{v.name}{k}") for v in vs}
        if not any(w in avoid for w in mapping.values()):
            return apply(mapping, r), k
        k += 1


def is_variant(a, b) -> bool:
    """True iff ``a`` and ``b`` are equal up to a bijective variable renaming."""
    va, vb = variables(a), variables(b)
    if len(va) != len(vb):
        return False
    ren = dict(zip(va, vb))
    return len(set(ren.values())) == len(vb) and apply(ren, a) == b


# ----------------------------------------------------------------- printing

def _list_parts(t: Fn) -> tuple[list[Term], Term]:
    items = []
    while isinstance(t, Fn) and t.functor == "cons" and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    return items, t


def _is_slash(t: Term) -> bool:
    return isinstance(t, Fn) and t.functor == "/" and len(t.args) == 2


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.functor == "nil" and not t.args:
        return "[]"
    if t.functor == "cons" and len(t.args) == 2:
        items, tail = _list_parts(t)
        inner = ",".join(format_term(x) for x in items)
        if tail == NIL:
            return f"[{inner}]"
        return f"[{inner}|{format_term(tail)}]"
    if _is_slash(t):
        left, right = (format_term(a) for a in t.args)
        if _is_slash(t.args[1]):
            right = f"({right})"
        return f"{left}/{right}"
    if not t.args:
        return t.functor
    return f"{t.functor}({','.join(format_term(a) for a in t.args)})"


def format_atom(a: Atom) -> str:
    if a.is_builtin:
        return f"{format_term(a.args[0])}={format_term(a.args[1])}"
    if not a.args:
        return a.pred
    return f"{a.pred}({','.join(format_term(t) for t in a.args)})"


def format_literal(lit: Literal) -> str:
    return format_atom(lit.atom) if lit.positive else f"not {format_atom(lit.atom)}"


def format_rule(r: Rule) -> str:
    if not r.body:
        return f"{format_atom(r.head)}."
    return f"{format_atom(r.head)} :- {', '.join(format_literal(l) for l in r.body)}."


def format_program(p: Iterable[Rule]) -> str:
    return "".join(format_rule(r) + "\n" for r in p)


def format_subst(s: Mapping[Var, Term], order: Optional[Iterable[Var]] = None) -> str:
    keys = list(order) if order is not None else sorted(s, key=lambda v: v.name)
    return ", ".join(f"{v.name}={format_term(s[v])}" for v in keys if v in s)


def format_pred(key: tuple[str, int]) -> str:
    return f"{key[0]}/{key[1]}"
