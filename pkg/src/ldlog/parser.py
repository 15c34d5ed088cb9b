"""Lexer, parser, and renderer for the rule DSL.

Surface syntax, one statement per '.' or '?' terminator:

    f1: edge("a", "b").                 fact (label optional)
    r2: path(x, y) :- path(x, z), edge(z, y).
    q1: path("b", m?)?                  query; m? is a placeholder
    use thm1, thm2.                     import named library clauses
    struct Rect(x1, y1, x2, y2).        constructor with named fields
    def rect1 := Rect(50, 50, 400, 100).

Atoms are either ident(args) or a parenthesized term, which is how
comparison premises are written: (x <= 4). Terms are integer literals,
string literals, identifiers, constructor applications, field projections
(value.field), and comparisons (only inside a parenthesized atom).
Comments run from '//' to end of line.

A '.' after a term is a projection only when followed by a plain
identifier that is not itself followed by ':' or '(' ; otherwise it
terminates the statement. That makes `def a := b. p("x").` parse as two
statements while `def a := r.x1.` projects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .errors import SourceError
from .terms import INT64_MAX, INT64_MIN, quote_string

KEYWORDS = ("use", "struct", "def")

# Longest match first: two-char punctuation before its one-char prefixes.
_PUNCT2 = (":-", "<=", ">=", "!=")
_PUNCT1 = ("(", ")", ",", ".", "?", ":", "<", ">", "=")

_MAX_TERM_DEPTH = 100


class LexError(SourceError):
    """Illegal character, unterminated string, or out-of-range literal."""


class ParseError(SourceError):
    """Unexpected token; carries the expected alternatives."""

    def __init__(self, line: int, column: int, expected: Tuple[str, ...], found: str):
        self.expected = tuple(expected)
        self.found = found
        alts = " or ".join(expected) if len(expected) <= 2 else ", ".join(expected[:-1]) + ", or " + expected[-1]
        super().__init__(line, column, f"expected {alts}, found {found}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "str" | "kw" | "punct" | "eof"
    value: object
    line: int
    col: int


# ---------------------------------------------------------------------------
# Statement and term ASTs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntAst:
    value: int


@dataclass(frozen=True)
class StrAst:
    value: str


@dataclass(frozen=True)
class IdentAst:
    name: str


@dataclass(frozen=True)
class AppAst:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class ProjAst:
    base: "TermAst"
    field: str


@dataclass(frozen=True)
class CmpAst:
    op: str  # source operator text: < <= > >= = !=
    lhs: "TermAst"
    rhs: "TermAst"


TermAst = Union[IntAst, StrAst, IdentAst, AppAst, ProjAst, CmpAst]


@dataclass(frozen=True)
class Application:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class ParenTerm:
    term: TermAst


AtomAst = Union[Application, ParenTerm]


@dataclass(frozen=True)
class FactStmt:
    label: Optional[str]
    atom: AtomAst


@dataclass(frozen=True)
class RuleStmt:
    label: Optional[str]
    head: AtomAst
    body: tuple


@dataclass(frozen=True)
class QueryStmt:
    label: Optional[str]
    atom: AtomAst


@dataclass(frozen=True)
class UseStmt:
    names: tuple


@dataclass(frozen=True)
class StructStmt:
    name: str
    fields: tuple


@dataclass(frozen=True)
class DefStmt:
    name: str
    value: TermAst


StatementAst = Union[FactStmt, RuleStmt, QueryStmt, UseStmt, StructStmt, DefStmt]


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def tokenize(source: str) -> List[Token]:
    """Split source text into tokens; raises LexError on bad input."""
    return _Lexer(source).run()


def _is_digit(ch: str) -> bool:
    # str.isdigit also accepts superscripts and other unicode digits that
    # int() rejects; only ASCII digits start a number token
    return "0" <= ch <= "9"


class _Lexer:
    def __init__(self, source: str):
        self.source = source
        self.i = 0
        self.line = 1
        self.col = 1

    def current(self) -> str:
        return self.source[self.i] if self.i < len(self.source) else ""

    def lookahead(self, k: int = 1) -> str:
        j = self.i + k
        return self.source[j] if j < len(self.source) else ""

    def advance(self, k: int = 1) -> None:
        for _ in range(k):
            if self.i < len(self.source) and self.source[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def run(self) -> List[Token]:
        tokens: List[Token] = []
        while self.i < len(self.source):
            ch = self.current()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "/":
                if self.lookahead() != "/":
                    raise LexError(self.line, self.col, "illegal character '/'")
                while self.i < len(self.source) and self.current() != "\n":
                    self.advance()
            elif ch == '"':
                tokens.append(self.string())
            elif _is_digit(ch) or (ch == "-" and _is_digit(self.lookahead())):
                tokens.append(self.number())
            elif ch.isascii() and (ch.isalpha() or ch == "_"):
                tokens.append(self.ident())
            elif self.source[self.i : self.i + 2] in _PUNCT2:
                tokens.append(Token("punct", self.source[self.i : self.i + 2], self.line, self.col))
                self.advance(2)
            elif ch in _PUNCT1:
                tokens.append(Token("punct", ch, self.line, self.col))
                self.advance()
            else:
                raise LexError(self.line, self.col, f"illegal character {ch!r}")
        return tokens

    def number(self) -> Token:
        start_line, start_col = self.line, self.col
        j = self.i + 1
        while j < len(self.source) and _is_digit(self.source[j]):
            j += 1
        text = self.source[self.i : j]
        value = int(text)
        if not INT64_MIN <= value <= INT64_MAX:
            raise LexError(start_line, start_col, f"integer literal out of range: {text}")
        self.advance(j - self.i)
        return Token("int", value, start_line, start_col)

    def ident(self) -> Token:
        start_line, start_col = self.line, self.col
        j = self.i
        while j < len(self.source) and self.source[j].isascii() and (self.source[j].isalnum() or self.source[j] == "_"):
            j += 1
        if j < len(self.source) and self.source[j] == "?":
            j += 1
        text = self.source[self.i : j]
        self.advance(j - self.i)
        kind = "kw" if text in KEYWORDS else "ident"
        return Token(kind, text, start_line, start_col)

    def string(self) -> Token:
        start_line, start_col = self.line, self.col
        self.advance()  # opening quote
        parts: List[str] = []
        while True:
            ch = self.current()
            if ch == "" or ch == "\n":
                raise LexError(start_line, start_col, "unterminated string literal")
            if ch == '"':
                self.advance()
                return Token("str", "".join(parts), start_line, start_col)
            if ch == "\\":
                esc = self.lookahead()
                if esc == "":
                    raise LexError(start_line, start_col, "unterminated string literal")
                if esc not in _STRING_ESCAPES:
                    raise LexError(self.line, self.col, f"invalid escape sequence '\\{esc}'")
                parts.append(_STRING_ESCAPES[esc])
                self.advance(2)
            else:
                parts.append(ch)
                self.advance()


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def parse_program(source: str) -> List[StatementAst]:
    """Parse a full program; raises LexError or ParseError on bad input."""
    tokens = tokenize(source)
    if tokens:
        last = tokens[-1]
        width = len(str(last.value)) if last.kind != "str" else len(quote_string(last.value))
        eof = Token("eof", None, last.line, last.col + width)
    else:
        eof = Token("eof", None, 1, 1)
    return _Parser(tokens + [eof]).program()


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, expected: Tuple[str, ...]) -> ParseError:
        t = self.peek()
        if t.kind == "eof":
            found = "end of input"
        elif t.kind == "str":
            found = "string literal"
        elif t.kind == "int":
            found = f"integer {t.value}"
        else:
            found = f"'{t.value}'"
        return ParseError(t.line, t.col, expected, found)

    def expect_punct(self, p: str) -> Token:
        t = self.peek()
        if t.kind == "punct" and t.value == p:
            return self.next()
        raise self.error((f"'{p}'",))

    def at_punct(self, p: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "punct" and t.value == p

    def plain_ident(self, what: str) -> str:
        t = self.peek()
        if t.kind == "ident" and not t.value.endswith("?"):
            self.next()
            return t.value
        raise self.error((what,))

    # -- statements --------------------------------------------------------

    def program(self) -> List[StatementAst]:
        out: List[StatementAst] = []
        while self.peek().kind != "eof":
            out.append(self.statement())
        return out

    def statement(self) -> StatementAst:
        t = self.peek()
        if t.kind == "kw":
            if t.value == "use":
                return self.use_stmt()
            if t.value == "struct":
                return self.struct_stmt()
            return self.def_stmt()
        label = None
        if t.kind == "ident" and self.at_punct(":", 1):
            label = self.plain_ident("plain identifier label")
            self.next()  # ':'
        atom = self.atom()
        t = self.peek()
        if self.at_punct("."):
            self.next()
            return FactStmt(label, atom)
        if self.at_punct("?"):
            self.next()
            return QueryStmt(label, atom)
        if self.at_punct(":-"):
            self.next()
            body = [self.atom()]
            while self.at_punct(","):
                self.next()
                body.append(self.atom())
            self.expect_punct(".")
            return RuleStmt(label, atom, tuple(body))
        raise self.error(("'.'", "'?'", "':-'"))

    def use_stmt(self) -> UseStmt:
        self.next()  # 'use'
        names = [self.plain_ident("clause name")]
        while self.at_punct(","):
            self.next()
            names.append(self.plain_ident("clause name"))
        self.expect_punct(".")
        return UseStmt(tuple(names))

    def struct_stmt(self) -> StructStmt:
        self.next()  # 'struct'
        name = self.plain_ident("constructor name")
        self.expect_punct("(")
        fields = [self.plain_ident("field name")]
        while self.at_punct(","):
            self.next()
            fields.append(self.plain_ident("field name"))
        self.expect_punct(")")
        self.expect_punct(".")
        return StructStmt(name, tuple(fields))

    def def_stmt(self) -> DefStmt:
        self.next()  # 'def'
        name = self.plain_ident("definition name")
        self.expect_punct(":")
        self.expect_punct("=")
        value = self.term(0)
        self.expect_punct(".")
        return DefStmt(name, value)

    # -- atoms and terms ----------------------------------------------------

    def atom(self) -> AtomAst:
        if self.at_punct("("):
            self.next()
            t = self.term(0)
            self.expect_punct(")")
            return ParenTerm(t)
        name = self.plain_ident("predicate name")
        self.expect_punct("(")
        args = self.args(0)
        return Application(name, args)

    def args(self, depth: int) -> tuple:
        # opening '(' already consumed; consumes the closing ')'
        if self.at_punct(")"):
            self.next()
            return ()
        out = [self.term(depth)]
        while self.at_punct(","):
            self.next()
            out.append(self.term(depth))
        self.expect_punct(")")
        return tuple(out)

    def term(self, depth: int) -> TermAst:
        if depth > _MAX_TERM_DEPTH:
            t = self.peek()
            raise ParseError(t.line, t.col, ("a shallower term",), "term nesting too deep")
        lhs = self.operand(depth)
        t = self.peek()
        if t.kind == "punct" and t.value in ("<", "<=", ">", ">=", "=", "!="):
            self.next()
            rhs = self.operand(depth)
            return CmpAst(t.value, lhs, rhs)
        return lhs

    def operand(self, depth: int) -> TermAst:
        t = self.peek()
        if t.kind == "int":
            self.next()
            base: TermAst = IntAst(t.value)
        elif t.kind == "str":
            self.next()
            base = StrAst(t.value)
        elif t.kind == "ident":
            self.next()
            if self.at_punct("("):
                if t.value.endswith("?"):
                    raise ParseError(t.line, t.col, ("plain identifier",), f"placeholder '{t.value}' applied to arguments")
                self.next()
                base = AppAst(t.value, self.args(depth + 1))
            else:
                base = IdentAst(t.value)
        else:
            raise self.error(("a term",))
        while self._at_projection():
            self.next()  # '.'
            field = self.plain_ident("field name")
            base = ProjAst(base, field)
        return base

    def _at_projection(self) -> bool:
        # '.' then plain ident, where the ident does not itself start a new
        # statement (label ':' or unlabeled atom '(').
        if not self.at_punct("."):
            return False
        nxt = self.peek(1)
        if nxt.kind != "ident" or nxt.value.endswith("?"):
            return False
        return not (self.at_punct(":", 2) or self.at_punct("(", 2))


# ---------------------------------------------------------------------------
# Renderer
# ---------------------------------------------------------------------------


def render_term(t: TermAst) -> str:
    if isinstance(t, IntAst):
        return str(t.value)
    if isinstance(t, StrAst):
        return quote_string(t.value)
    if isinstance(t, IdentAst):
        return t.name
    if isinstance(t, AppAst):
        return f"{t.name}({', '.join(render_term(a) for a in t.args)})"
    if isinstance(t, ProjAst):
        return f"{render_term(t.base)}.{t.field}"
    return f"{render_term(t.lhs)} {t.op} {render_term(t.rhs)}"


def render_atom(a: AtomAst) -> str:
    if isinstance(a, Application):
        return f"{a.name}({', '.join(render_term(t) for t in a.args)})"
    return f"({render_term(a.term)})"


def render_statement(s: StatementAst) -> str:
    """Concrete syntax for one statement; reparses to an equal AST."""
    if isinstance(s, FactStmt):
        prefix = f"{s.label}: " if s.label else ""
        return f"{prefix}{render_atom(s.atom)}."
    if isinstance(s, RuleStmt):
        prefix = f"{s.label}: " if s.label else ""
        body = ", ".join(render_atom(a) for a in s.body)
        return f"{prefix}{render_atom(s.head)} :- {body}."
    if isinstance(s, QueryStmt):
        prefix = f"{s.label}: " if s.label else ""
        return f"{prefix}{render_atom(s.atom)}?"
    if isinstance(s, UseStmt):
        return f"use {', '.join(s.names)}."
    if isinstance(s, StructStmt):
        return f"struct {s.name}({', '.join(s.fields)})."
    return f"def {s.name} := {render_term(s.value)}."


def render_program(statements) -> str:
    """One statement per line."""
    return "\n".join(render_statement(s) for s in statements) + ("\n" if statements else "")
