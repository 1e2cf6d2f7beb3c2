"""The script DSL: a small declarative language for presentations,
constructor expressions, check suites and artifact emission.

Grammar (EBNF sketch):

    script  := stmt*
    stmt    := "algebra" NAME "{" "p" "=" INT ";" "generators" "=" list ";"
               "relations" "=" list [";"] "}"
             | NAME "=" ctor
             | "check" NAME "(" args ")"
             | "emit" NAME "(" args ")"
    ctor    := NAME "(" args ")"
    args    := (arg ("," arg)*)?
    arg     := expr | NAME "=" expr
    expr    := INT | STRING | NAME | ctor | "[" (expr ("," expr)*)? "]"

Line comments start with "#".  Relation strings use the canonical
polynomial text form with "=" sugar (lhs = rhs stands for the relator
lhs - rhs).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ScriptError

# ---------------------------------------------------------------------------
# Tokens

_PUNCT = set("{}[]()=;,")


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "int" | "string" | punct | "eof"
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise ScriptError("syntax", "unterminated_string",
                                      "newline inside string", start_line, start_col)
                buf.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise ScriptError("syntax", "unterminated_string",
                                  "unterminated string literal", start_line, start_col)
            i += 1
            col += 1
            tokens.append(Token("string", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit():
            start_col = col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            start_col = col
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ScriptError("syntax", "bad_character", f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Ref:
    """A bare name in expression position: an algebra reference or an
    enumeration keyword, resolved by the consuming handler."""

    name: str


@dataclass(frozen=True)
class Ctor:
    name: str
    args: tuple
    kwargs: tuple  # of (name, value) pairs, declaration order
    line: int
    col: int


Expr = Union[int, str, Ref, Ctor, tuple]


@dataclass(frozen=True)
class AlgebraDef:
    name: str
    p: int
    generators: tuple[str, ...]
    relations: tuple[str, ...]
    line: int
    col: int


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Ctor
    line: int
    col: int


@dataclass(frozen=True)
class CheckStmt:
    name: str
    args: tuple
    kwargs: tuple
    line: int
    col: int


@dataclass(frozen=True)
class EmitStmt:
    target: str
    args: tuple
    kwargs: tuple
    line: int
    col: int


@dataclass(frozen=True)
class Script:
    statements: tuple


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ScriptError(
                "syntax", "unexpected_token",
                f"expected {expected}, found {tok.value!r}" if tok.kind != "eof"
                else f"expected {expected}, found end of input",
                tok.line, tok.col,
            )
        return self.advance()

    def expect_name(self, description: str = "a name") -> Token:
        return self.expect("name", description)

    def expect_keyword(self, word: str) -> Token:
        tok = self.expect("name", f"{word!r}")
        if tok.value != word:
            raise ScriptError("syntax", "unexpected_token",
                              f"expected {word!r}, found {tok.value!r}", tok.line, tok.col)
        return tok

    # -- statements --------------------------------------------------------

    def parse_script(self) -> Script:
        stmts = []
        while self.peek().kind != "eof":
            stmts.append(self.parse_statement())
        return Script(tuple(stmts))

    def parse_statement(self):
        tok = self.peek()
        if tok.kind != "name":
            raise ScriptError("syntax", "unexpected_token",
                              f"expected a statement, found {tok.value!r}",
                              tok.line, tok.col)
        if tok.value == "algebra":
            return self.parse_algebra()
        if tok.value == "check":
            self.advance()
            name = self.expect_name("a check name")
            args, kwargs = self.parse_call_args()
            return CheckStmt(name.value, args, kwargs, tok.line, tok.col)
        if tok.value == "emit":
            self.advance()
            name = self.expect_name("an emit target")
            args, kwargs = self.parse_call_args()
            return EmitStmt(name.value, args, kwargs, tok.line, tok.col)
        name = self.advance()
        self.expect("=", "'='")
        expr = self.parse_expr()
        if not isinstance(expr, Ctor):
            raise ScriptError("syntax", "expected_constructor",
                              "right-hand side must be a constructor call",
                              name.line, name.col)
        return Assign(name.value, expr, name.line, name.col)

    def parse_algebra(self) -> AlgebraDef:
        kw = self.advance()
        name = self.expect_name("an algebra name")
        self.expect("{", "'{'")
        self.expect_keyword("p")
        self.expect("=", "'='")
        p = int(self.expect("int", "an integer").value)
        self.expect(";", "';'")
        self.expect_keyword("generators")
        self.expect("=", "'='")
        gens = self.parse_name_list()
        self.expect(";", "';'")
        self.expect_keyword("relations")
        self.expect("=", "'='")
        rels = self.parse_string_list()
        if self.peek().kind == ";":
            self.advance()
        self.expect("}", "'}'")
        return AlgebraDef(name.value, p, gens, rels, kw.line, kw.col)

    def parse_name_list(self) -> tuple[str, ...]:
        self.expect("[", "'['")
        names = []
        if self.peek().kind != "]":
            names.append(self.expect_name("a generator name").value)
            while self.peek().kind == ",":
                self.advance()
                names.append(self.expect_name("a generator name").value)
        self.expect("]", "']'")
        return tuple(names)

    def parse_string_list(self) -> tuple[str, ...]:
        self.expect("[", "'['")
        out = []
        if self.peek().kind != "]":
            out.append(self.expect("string", "a relation string").value)
            while self.peek().kind == ",":
                self.advance()
                out.append(self.expect("string", "a relation string").value)
        self.expect("]", "']'")
        return tuple(out)

    # -- expressions --------------------------------------------------------

    def parse_call_args(self):
        self.expect("(", "'('")
        args = []
        kwargs = []
        if self.peek().kind != ")":
            self.parse_arg(args, kwargs)
            while self.peek().kind == ",":
                self.advance()
                self.parse_arg(args, kwargs)
        self.expect(")", "')'")
        return tuple(args), tuple(kwargs)

    def parse_arg(self, args: list, kwargs: list):
        tok = self.peek()
        if tok.kind == "name" and self.tokens[self.pos + 1].kind == "=":
            key = self.advance().value
            self.advance()
            value = self.parse_expr()
            kwargs.append((key, value))
            return
        if kwargs:
            raise ScriptError("syntax", "positional_after_keyword",
                              "positional argument after keyword argument",
                              tok.line, tok.col)
        args.append(self.parse_expr())

    def parse_expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return int(tok.value)
        if tok.kind == "string":
            self.advance()
            return tok.value
        if tok.kind == "[":
            self.advance()
            items = []
            if self.peek().kind != "]":
                items.append(self.parse_expr())
                while self.peek().kind == ",":
                    self.advance()
                    items.append(self.parse_expr())
            self.expect("]", "']'")
            return tuple(items)
        if tok.kind == "name":
            self.advance()
            if self.peek().kind == "(":
                args, kwargs = self.parse_call_args()
                return Ctor(tok.value, args, kwargs, tok.line, tok.col)
            return Ref(tok.value)
        raise ScriptError("syntax", "unexpected_token",
                          f"expected an expression, found {tok.value!r}",
                          tok.line, tok.col)


def parse(text: str) -> Script:
    """Parse script text; raises ScriptError with line:col on failure."""
    return _Parser(tokenize(text)).parse_script()


# ---------------------------------------------------------------------------
# Canonical serialization

def _expr_text(e: Expr) -> str:
    if isinstance(e, bool):
        raise TypeError("booleans are not script values")
    if isinstance(e, int):
        return str(e)
    if isinstance(e, str):
        return f'"{e}"'
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Ctor):
        return f"{e.name}({_args_text(e.args, e.kwargs)})"
    if isinstance(e, tuple):
        return "[" + ", ".join(_expr_text(x) for x in e) + "]"
    raise TypeError(f"cannot serialize {e!r}")


def _args_text(args: tuple, kwargs: tuple) -> str:
    parts = [_expr_text(a) for a in args]
    parts += [f"{k}={_expr_text(v)}" for k, v in kwargs]
    return ", ".join(parts)


def serialize(script: Script) -> str:
    """Canonical text form; parse(serialize(parse(s))) == parse(s)."""
    lines = []
    for stmt in script.statements:
        if isinstance(stmt, AlgebraDef):
            gens = ", ".join(stmt.generators)
            rels = ", ".join(f'"{r}"' for r in stmt.relations)
            lines.append(
                f"algebra {stmt.name} {{ p = {stmt.p}; generators = [{gens}]; "
                f"relations = [{rels}] }}"
            )
        elif isinstance(stmt, Assign):
            lines.append(f"{stmt.name} = {_expr_text(stmt.expr)}")
        elif isinstance(stmt, CheckStmt):
            lines.append(f"check {stmt.name}({_args_text(stmt.args, stmt.kwargs)})")
        elif isinstance(stmt, EmitStmt):
            lines.append(f"emit {stmt.target}({_args_text(stmt.args, stmt.kwargs)})")
        else:
            raise TypeError(f"unknown statement {stmt!r}")
    return "\n".join(lines) + ("\n" if lines else "")
