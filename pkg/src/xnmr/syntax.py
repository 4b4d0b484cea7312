"""Parser and AST for function-free normal logic programs.

Programs are written in a small Prolog-like dialect::

    % comments run to end of line
    move(1,2).
    win(X) :- move(X,Y), not win(Y).

Terms are constants (``a``, ``foo_1``), signed integers and variables
(``X``, ``_Tmp``).  A bare ``_`` is anonymous: every occurrence is a
distinct variable.  Every rule must be safe: each of its variables has to
occur in some positive body literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import ParseError, SafetyError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

CONST_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*\Z")
INT_RE = re.compile(r"-?(?:0|[1-9][0-9]*)\Z")

# Canonical printed ground atom: name, or name(arg,...,arg) with no spaces.
# Reserved "__" names are accepted here since answer atoms travel through
# the same printer.
_GROUND_ARG = r"(?:[a-z][A-Za-z0-9_]*|-?(?:0|[1-9][0-9]*))"
GROUND_ATOM_RE = re.compile(
    rf"(?:[a-z]|__)[A-Za-z0-9_]*(?:\({_GROUND_ARG}(?:,{_GROUND_ARG})*\))?\Z"
)

KEYWORD_NOT = "not"


@dataclass(frozen=True)
class Term:
    kind: str  # "const" | "int" | "var"
    value: str | int

    @property
    def is_var(self) -> bool:
        return self.kind == "var"

    def __str__(self) -> str:
        return str(self.value)


def Const(name: str) -> Term:
    return Term("const", name)


def Int(n: int) -> Term:
    return Term("int", n)


def Var(name: str) -> Term:
    return Term("var", name)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    @property
    def is_ground(self) -> bool:
        return not any(t.is_var for t in self.args)

    def variables(self) -> Iterator[str]:
        for t in self.args:
            if t.is_var:
                yield t.value  # type: ignore[misc]

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Literal, ...] = ()

    @property
    def positive(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if not l.negated)

    @property
    def negative(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if l.negated)

    def variables(self) -> list[str]:
        """Variables in first-occurrence order (head first, then body)."""
        seen: dict[str, None] = {}
        for v in self.head.variables():
            seen.setdefault(v)
        for lit in self.body:
            for v in lit.atom.variables():
                seen.setdefault(v)
        return list(seen)

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(l) for l in self.body)}."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    # 1-based source line of each rule; not part of structural equality
    lines: tuple[int, ...] = field(default=(), compare=False)

    def __add__(self, other: Program) -> Program:
        return Program(self.rules + other.rules, self.lines + other.lines)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return format_program(self)


@dataclass(frozen=True)
class Query:
    literals: tuple[Literal, ...]

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for lit in self.literals:
            for v in lit.atom.variables():
                seen.setdefault(v)
        return list(seen)

    def __str__(self) -> str:
        return ", ".join(str(l) for l in self.literals)


def format_program(program: Program) -> str:
    return "".join(f"{rule}\n" for rule in program.rules)


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<query>\?-)
  | (?P<int>-?[0-9]+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            if kind == "punct":
                kind = m.group()
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.anon = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(tok.line, tok.column, f"{message}, found {found}")

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            raise self.fail(f"expected {what}")
        self.i += 1
        return tok

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "name":
            self.i += 1
            return Const(tok.text)
        if tok.kind == "var":
            self.i += 1
            if tok.text == "_":
                self.anon += 1
                return Var(f"_{self.anon}")
            return Var(tok.text)
        if tok.kind == "int":
            self.i += 1
            n = int(tok.text)
            if not INT64_MIN <= n <= INT64_MAX:
                raise ParseError(tok.line, tok.column, "integer out of 64-bit range")
            return Int(n)
        raise self.fail("expected a term")

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind != "name" or tok.text == KEYWORD_NOT:
            raise self.fail("expected an atom")
        self.i += 1
        args: list[Term] = []
        if self.tok.kind == "(":
            self.i += 1
            args.append(self.term())
            while self.tok.kind == ",":
                self.i += 1
                args.append(self.term())
            self.expect(")", "',' or ')'")
        return Atom(tok.text, tuple(args))

    def literal(self) -> Literal:
        tok = self.tok
        if tok.kind == "name" and tok.text == KEYWORD_NOT:
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "name":
                self.i += 1
                return Literal(self.atom(), negated=True)
        return Literal(self.atom())

    def body(self) -> tuple[Literal, ...]:
        lits = [self.literal()]
        while self.tok.kind == ",":
            self.i += 1
            lits.append(self.literal())
        return tuple(lits)

    def clause(self) -> Rule:
        self.anon = 0
        head = self.atom()
        if self.tok.kind == "if":
            self.i += 1
            body = self.body()
        else:
            body = ()
        self.expect(".", "'.' or ':-'" if not body else "',' or '.'")
        return Rule(head, body)


def check_rule_safety(rule: Rule, index: int, line: int | None = None) -> None:
    bound = {v for a in rule.positive for v in a.variables()}
    for v in rule.variables():
        if v not in bound:
            raise SafetyError(index, _display_var(v), line)


def check_query_safety(query: Query) -> None:
    bound = {v for l in query.literals if not l.negated for v in l.atom.variables()}
    for v in query.variables():
        if v not in bound:
            raise SafetyError(-1, _display_var(v))


def _display_var(name: str) -> str:
    return "_" if re.fullmatch(r"_[0-9]+", name) else name


def parse_program(text: str) -> Program:
    p = _Parser(text)
    rules, lines = [], []
    while p.tok.kind != "eof":
        start = p.tok
        rule = p.clause()
        check_rule_safety(rule, len(rules), start.line)
        rules.append(rule)
        lines.append(start.line)
    return Program(tuple(rules), tuple(lines))


def parse_query(text: str) -> Query:
    p = _Parser(text)
    if p.tok.kind == "query":
        p.i += 1
    lits = p.body()
    if p.tok.kind == ".":
        p.i += 1
    if p.tok.kind != "eof":
        raise p.fail("expected ',' or end of query")
    query = Query(lits)
    check_query_safety(query)
    return query


def ground_atom_text(predicate: str, values: tuple[str | int, ...]) -> str:
    if not values:
        return predicate
    return f"{predicate}({','.join(str(v) for v in values)})"


def split_ground_atom(text: str) -> tuple[str, tuple[str | int, ...]]:
    """Inverse of :func:`ground_atom_text` for canonical ground atom text."""
    if not GROUND_ATOM_RE.match(text):
        raise ValueError(f"not a canonical ground atom: {text!r}")
    if "(" not in text:
        return text, ()
    name, rest = text.split("(", 1)
    values: list[str | int] = []
    for arg in rest[:-1].split(","):
        values.append(arg if CONST_RE.match(arg) else int(arg))
    return name, tuple(values)
