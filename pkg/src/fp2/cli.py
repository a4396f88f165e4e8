"""Command-line front end.

Exit codes: 0 ok, 1 program not in FP2 (``check``), 2 usage or parse
error, 3 query not call-safe / no usable certificate, 4 limit exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .depgraph import build_pred_graph, component_has_odd_cycle, sccs
from .derivation import SUCCESS, agoal, derivations, format_goal
from .errors import Fp2Error, LimitExceeded, NotCallSafe, NotGround, PatternError
from .norms import compare, norm
from .parser import ParseError, parse_atom, parse_program
from .patterns import (
    DEFAULT_BUDGET, LITERAL, MODES, call_pattern_for, check_goal_call_safe, classify_rule, find_call_pattern,
    format_mapping, parse_mapping, selected,
)
from .solver import (
    CREDULOUS, NEITHER, SKEPTICAL, answer_query, compose_query, composition_relation,
    default_atom_limit, stable_models,
)
from .support import support_subprogram
from .terms import format_atom, format_literal, format_pred, format_subst, format_term, variables

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_UNSAFE, EXIT_LIMIT = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Exit(EXIT_USAGE, f"cannot read {path}: {exc.strerror}")
    try:
        return parse_program(text)
    except ParseError as exc:
        raise _Exit(EXIT_USAGE, f"{path}: {exc}")


def _query(text: str):
    try:
        return parse_atom(text)
    except ParseError as exc:
        raise _Exit(EXIT_USAGE, f"query: {exc}")


def _certificate(program, args, query=None):
    if args.call_pattern:
        try:
            tau = parse_mapping(args.call_pattern, program)
            return call_pattern_for(program, tau, args.odd_cycle)
        except PatternError as exc:
            raise _Exit(EXIT_UNSAFE, f"call pattern rejected: {exc}")
    goal = [query] if query is not None else ()
    verdict = find_call_pattern(program, args.odd_cycle, args.budget, goal=goal)
    if verdict.budget_exceeded:
        raise _Exit(EXIT_LIMIT, verdict.reason)
    if not verdict.is_fp2:
        raise _Exit(EXIT_UNSAFE, f"no call pattern: {verdict.reason}")
    return verdict.certificate


def _mode(args) -> str:
    return SKEPTICAL if args.skeptical else CREDULOUS


def _print_answers(query, answers, consistent, out):
    if not consistent:
        print("inconsistent", file=out)
    qvars = variables(query)
    if not qvars:
        print("yes" if answers else "no", file=out)
        return
    if not answers:
        print("no", file=out)
    for ans in answers:
        print(format_subst(ans, qvars), file=out)


# ---------------------------------------------------------------- commands

def cmd_check(args, out) -> int:
    program = _read(args.file)
    verdict = find_call_pattern(program, args.odd_cycle, args.budget)
    if verdict.budget_exceeded:
        raise _Exit(EXIT_LIMIT, verdict.reason)
    if verdict.is_fp2:
        print("FP2: yes", file=out)
        print(format_mapping(verdict.certificate.mapping), file=out)
        return EXIT_OK
    print("FP2: no", file=out)
    print(f"reason: {verdict.reason}", file=out)
    return EXIT_NO


def cmd_analyze(args, out) -> int:
    program = _read(args.file)
    graph = build_pred_graph(program)
    part = sccs(graph)
    print("predicates: " + ", ".join(format_pred(p) for p in graph.vertices), file=out)
    print("edges:", file=out)
    for e in graph.edges:
        print(f"  {format_pred(e.src)} -> {format_pred(e.dst)} ({e.sign})"
              f" rule {e.rule + 1} literal {e.position + 1}", file=out)
    print("components (callees first):", file=out)
    order = {p: i for i, p in enumerate(graph.vertices)}
    for ci, comp in enumerate(part.components):
        members = ", ".join(format_pred(p) for p in sorted(comp, key=order.__getitem__))
        odd = "yes" if component_has_odd_cycle(graph, comp) else "no"
        print(f"  [{ci + 1}] {{{members}}} odd-cycle: {odd}", file=out)
    if args.call_pattern:
        cp = _certificate(program, args)
    else:
        verdict = find_call_pattern(program, args.odd_cycle, args.budget)
        if not verdict.is_fp2:
            print(f"certificate: none ({verdict.reason})", file=out)
            return EXIT_OK
        cp = verdict.certificate
    pi = cp.recursion_pattern
    print(f"call pattern: {format_mapping(cp.mapping)}", file=out)
    print(f"recursion pattern: {format_mapping(pi, graph.vertices)}", file=out)
    print("rules:", file=out)
    for ri, rule in enumerate(program.rules):
        print(f"  {ri + 1}. {rule}  [{classify_rule(rule, pi, part)}]", file=out)
        head_sel = selected(rule.head, pi)
        for lit in rule.body:
            if lit.atom.is_builtin or not part.same(lit.key, rule.head.key):
                continue
            body_sel = selected(lit.atom, pi)
            res = compare(body_sel, head_sel)
            print(f"       {format_literal(lit)}: |{_vec(body_sel)}|={norm(body_sel)}"
                  f" {res.symbol()} |{_vec(head_sel)}|={norm(head_sel)}", file=out)
    return EXIT_OK


def _vec(terms) -> str:
    return ",".join(format_term(t) for t in terms)


def cmd_ground(args, out) -> int:
    program = _read(args.file)
    query = _query(args.query)
    cp = _certificate(program, args, query)
    sp = support_subprogram(program, cp, query)
    out.write(sp.text())
    return EXIT_OK


def cmd_query(args, out) -> int:
    program = _read(args.file)
    query = _query(args.query)
    cp = _certificate(program, args, query)
    res = answer_query(program, cp, query, _mode(args), args.atom_limit)
    _print_answers(query, res.answers, res.consistent, out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    program = _read(args.file)
    try:
        models = stable_models(program, args.atom_limit)
    except NotGround as exc:
        raise _Exit(EXIT_USAGE, f"{args.file}: {exc}")
    for m in models:
        print("{" + ", ".join(sorted(format_atom(a) for a in m)) + "}", file=out)
    if not models.models:
        print("no stable models", file=sys.stderr)
    return EXIT_OK


def cmd_trace(args, out) -> int:
    program = _read(args.file)
    query = _query(args.query)
    cp = _certificate(program, args, query)
    goal = agoal(query)
    if not check_goal_call_safe(goal, cp.mapping):
        raise _Exit(EXIT_UNSAFE, "goal not call-safe")
    ordered = cp.reordered(program)
    qvars = variables(query)
    leaves = derivations(goal, ordered, prune_cycles=not args.no_prune, max_depth=args.max_depth)
    for n, leaf in enumerate(leaves, 1):
        print(f"derivation {n}: {leaf.status}", file=out)
        for depth, node in enumerate(leaf.node.path()):
            step = ""
            if node.rule is not None:
                step = "  [builtin]" if node.rule < 0 else f"  [rule {node.rule + 1}]"
            print(f"  {depth}: {format_goal(node.goal)}{step}", file=out)
        if leaf.status == SUCCESS:
            ans = {v: t for v, t in zip(qvars, leaf.node.answer) if t != v}
            print(f"  answer: {format_subst(ans, qvars) or 'identity'}", file=out)
            sup = ", ".join(sorted(format_literal(l) for l in leaf.support))
            print(f"  support: {{{sup}}}", file=out)
        elif leaf.note:
            print(f"  note: {leaf.note}", file=out)
    return EXIT_OK


def cmd_compose(args, out) -> int:
    upper = _read(args.file)
    lower = _read(args.lower)
    query = _query(args.query)
    rel = composition_relation(upper, lower)
    if rel.kind == NEITHER:
        raise _Exit(EXIT_UNSAFE, f"programs are neither dependent nor independent: {rel}")
    cp = _certificate(upper, args, query)
    try:
        res = compose_query(upper, cp, lower, query, _mode(args), args.atom_limit)
    except NotGround as exc:
        raise _Exit(EXIT_USAGE, f"{args.lower}: {exc}")
    print(f"relation: {rel}", file=out)
    _print_answers(query, res.answers, res.consistent, out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


class _Parser(argparse.ArgumentParser):
    # one-line diagnostics instead of argparse's usage dump
    def error(self, message):
        raise _Exit(EXIT_USAGE, f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fp2", description="FP2 analysis and query answering for normal logic programs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pattern=True):
        p.add_argument("--odd-cycle", choices=MODES, default=LITERAL,
                       help="odd-cycle test for almost-never-increasing components (default: literal)")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                       help="maximum number of candidate mappings to test")
        p.add_argument("--format", choices=("text",), default="text", help="output format")
        if pattern:
            p.add_argument("--call-pattern", metavar="MAPPING",
                           help='explicit selection mapping, e.g. "p/3={1,3};q/1={1}"; '
                                "omitted predicates get the empty index")

    def limit(p):
        p.add_argument("--atom-limit", type=_positive, default=None,
                       help="maximum ground atoms handed to the solver (default: $FP2_ATOM_LIMIT or 24)")

    def reasoning(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--credulous", action="store_true", help="true in some stable model (default)")
        g.add_argument("--skeptical", action="store_true", help="true in every stable model")

    p = sub.add_parser("check", help="decide FP2 membership and print a certificate")
    p.add_argument("file")
    common(p, pattern=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="dependency graph, components and norm comparisons")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ground", help="print the support subprogram for a query")
    p.add_argument("file")
    p.add_argument("query")
    common(p)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("query", help="answer a query under the stable model semantics")
    p.add_argument("file")
    p.add_argument("query")
    common(p)
    reasoning(p)
    limit(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("solve", help="stable models of a finite ground program")
    p.add_argument("file")
    limit(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="print the acyclic a-derivations of a query")
    p.add_argument("file")
    p.add_argument("query")
    p.add_argument("--max-depth", type=_positive, default=None)
    p.add_argument("--no-prune", action="store_true", help="keep expanding cyclic goals (needs --max-depth)")
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("compose", help="query an FP2 program on top of a finite ground program")
    p.add_argument("file", help="the FP2 program")
    p.add_argument("lower", help="the finite ground program it depends on")
    p.add_argument("query")
    common(p)
    reasoning(p)
    limit(p)
    p.set_defaults(func=cmd_compose)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _Exit as exc:
        print(exc, file=err)
        return exc.code
    if args.command == "trace" and args.no_prune and args.max_depth is None:
        print("fp2: error: --no-prune requires --max-depth", file=err)
        return EXIT_USAGE
    if getattr(args, "atom_limit", None) is None and hasattr(args, "atom_limit"):
        try:
            args.atom_limit = default_atom_limit()
        except ValueError:
            print("fp2: error: FP2_ATOM_LIMIT must be an integer", file=err)
            return EXIT_USAGE
    try:
        return args.func(args, out)
    except _Exit as exc:
        print(f"fp2: {exc}", file=err)
        return exc.code
    except NotCallSafe as exc:
        print(f"fp2: {exc}", file=err)
        return EXIT_UNSAFE
    except LimitExceeded as exc:
        print(f"fp2: {exc}", file=err)
        return EXIT_LIMIT
    except Fp2Error as exc:
        print(f"fp2: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
