"""Concrete syntax for normal logic programs.

    head :- lit1, ..., litn.      head.      not atom      % comment

Variables start with an uppercase letter or ``_`` (a bare ``_`` is a
fresh variable).  ``[]``, ``[H|T]`` and ``[a,b]`` are sugar for
``nil``/``cons``; ``X/Y`` is the binary functor ``/``; ``s=t`` is the
builtin equality atom.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import EQ, NIL, Atom, Fn, Literal, Program, Rule, Var, cons


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<punct>[()\[\]|,.=/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "name":
            kind = "var" if chunk[0].isupper() or chunk[0] == "_" else "name"
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.fresh = 0
        self.taken = {t.text for t in self.tokens if t.kind == "var"}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "neck") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    # terms ------------------------------------------------------------
    def term(self):
        t = self.primary()
        while self.at("/"):
            self.i += 1
            t = Fn("/", (t, self.primary()))
        return t

    def primary(self):
        tok = self.tok
        if tok.kind == "var":
            self.i += 1
            if tok.text == "_":
                self.fresh += 1
                while f"_G{self.fresh}" in self.taken:
                    self.fresh += 1
                return Var(f"_G{self.fresh}")
            return Var(tok.text)
        if tok.kind == "name":
            self.i += 1
            if self.at("("):
                return Fn(tok.text, self.arguments())
            return Fn(tok.text)
        if self.at("["):
            return self.list_term()
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.error("expected a term")

    def arguments(self) -> tuple:
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.i += 1
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def list_term(self):
        self.expect("[")
        if self.at("]"):
            self.i += 1
            return NIL
        items = [self.term()]
        while self.at(","):
            self.i += 1
            items.append(self.term())
        tail = NIL
        if self.at("|"):
            self.i += 1
            tail = self.term()
        self.expect("]")
        for item in reversed(items):
            tail = cons(item, tail)
        return tail

    # atoms and rules --------------------------------------------------
    def atom(self) -> Atom:
        start = self.tok
        left = self.term()
        if self.at("="):
            self.i += 1
            return Atom(EQ, (left, self.term()))
        if isinstance(left, Var):
            self.error("expected an atom", start)
        return Atom(left.functor, left.args)

    def literal(self) -> Literal:
        tok = self.tok
        if tok.kind == "name" and tok.text == "not" and not (
            self.peek().kind == "punct" and self.peek().text == "("
        ):
            self.i += 1
            return Literal(self.atom(), False)
        return Literal(self.atom(), True)

    def body(self) -> tuple:
        lits = [self.literal()]
        while self.at(","):
            self.i += 1
            lits.append(self.literal())
        return tuple(lits)

    def rule(self) -> Rule:
        start = self.tok
        head = self.atom()
        if head.is_builtin:
            self.error("builtin '=' cannot be a rule head", start)
        body = ()
        if self.at(":-"):
            self.i += 1
            body = self.body()
        self.expect(".")
        return Rule(head, body)

    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return Program(tuple(rules))

    def finish(self):
        if self.at("."):
            self.i += 1
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_atom(text: str) -> Atom:
    """Parse a single atom, e.g. a query; a trailing ``.`` is allowed."""
    p = _Parser(text)
    a = p.atom()
    p.finish()
    return a


def parse_goal(text: str) -> tuple:
    p = _Parser(text)
    lits = p.body()
    p.finish()
    return lits
