"""The BES text format: parsing and printing of equation systems.

One equation per line, ``name = expr ;``.  Declaration order fixes variable
indices.  Expressions use ``|`` and ``&`` (with ``&`` binding tighter),
constants ``0`` and ``1``, parentheses, and parameters written ``?name`` or
negated ``!?name``; parameter indices follow first occurrence in text
order.  ``#`` starts a comment running to end of line.  Plain identifiers
must be declared by some equation; there are no implicit variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import And, Const, Formula, Or, Param, System, Var


class BesParseError(Exception):
    """Parse failure with position; kind is 'syntax' or 'semantic'."""

    def __init__(self, message: str, line: int, col: int, kind: str = "syntax"):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.kind = kind


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT CONST PUNCT END
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c.isalpha() or c == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("IDENT", text[start:i], line, col))
            col += i - start
        elif c in "01":
            if i + 1 < len(text) and text[i + 1].isalnum():
                raise BesParseError("malformed constant", line, col)
            tokens.append(_Token("CONST", c, line, col))
            col += 1
            i += 1
        elif c in "=;&|()?!":
            tokens.append(_Token("PUNCT", c, line, col))
            col += 1
            i += 1
        else:
            raise BesParseError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], var_index: dict[str, int]):
        self.tokens = tokens
        self.pos = 0
        self.var_index = var_index
        self.param_index: dict[str, int] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text or tok.kind == "END":
            found = repr(tok.text) if tok.text else "end of input"
            raise BesParseError(f"expected {text!r}, found {found}", tok.line, tok.col)
        return tok

    def parse_expr(self) -> Formula:
        f = self.parse_term()
        while self.peek().text == "|":
            self.take()
            f = Or(f, self.parse_term())
        return f

    def parse_term(self) -> Formula:
        f = self.parse_factor()
        while self.peek().text == "&":
            self.take()
            f = And(f, self.parse_factor())
        return f

    def parse_factor(self) -> Formula:
        tok = self.take()
        if tok.kind == "CONST":
            return Const(int(tok.text))
        if tok.kind == "IDENT":
            idx = self.var_index.get(tok.text)
            if idx is None:
                raise BesParseError(
                    f"undeclared identifier {tok.text!r}", tok.line, tok.col, "semantic"
                )
            return Var(idx)
        if tok.text == "(":
            f = self.parse_expr()
            self.expect(")")
            return f
        if tok.text == "!":
            self.expect("?")
            return Param(self.parse_param_name(), negated=True)
        if tok.text == "?":
            return Param(self.parse_param_name())
        found = repr(tok.text) if tok.text else "end of input"
        raise BesParseError(
            f"expected a constant, identifier, parameter, or '(', found {found}",
            tok.line,
            tok.col,
        )

    def parse_param_name(self) -> int:
        tok = self.take()
        if tok.kind != "IDENT":
            raise BesParseError("expected a parameter name after '?'", tok.line, tok.col)
        if tok.text in self.var_index:
            raise BesParseError(
                f"{tok.text!r} is a variable and cannot also be a parameter",
                tok.line,
                tok.col,
                "semantic",
            )
        if tok.text not in self.param_index:
            self.param_index[tok.text] = len(self.param_index)
        return self.param_index[tok.text]


def parse_system(text: str) -> System:
    """Parse BES text into a validated System.

    Raises BesParseError with line/column on malformed input, duplicate or
    undeclared identifiers, or an empty system.
    """
    tokens = _tokenize(text)
    # Split into equations at top-level semicolons and collect declarations
    # first, so equations may reference variables defined later in the file.
    equations: list[tuple[_Token, list[_Token]]] = []
    i = 0
    while tokens[i].kind != "END":
        head = tokens[i]
        if head.kind != "IDENT":
            raise BesParseError("expected an equation name", head.line, head.col)
        eq = tokens[i + 1]
        if eq.text != "=":
            raise BesParseError("expected '=' after the equation name", eq.line, eq.col)
        j = i + 2
        body: list[_Token] = []
        while tokens[j].kind != "END" and tokens[j].text != ";":
            body.append(tokens[j])
            j += 1
        if tokens[j].kind == "END":
            raise BesParseError("missing ';' at end of equation", tokens[j].line, tokens[j].col)
        if not body:
            raise BesParseError("empty right-hand side", tokens[j].line, tokens[j].col)
        equations.append((head, body))
        i = j + 1
    if not equations:
        raise BesParseError("empty system", 1, 1, "semantic")

    var_index: dict[str, int] = {}
    for head, _ in equations:
        if head.text in var_index:
            raise BesParseError(
                f"duplicate definition of {head.text!r}", head.line, head.col, "semantic"
            )
        var_index[head.text] = len(var_index)

    formulas = []
    param_index: dict[str, int] = {}
    for _, body in equations:
        parser = _Parser(body + [_Token("END", "", body[-1].line, body[-1].col + 1)], var_index)
        parser.param_index = param_index
        f = parser.parse_expr()
        trailing = parser.peek()
        if trailing.kind != "END":
            raise BesParseError(f"unexpected {trailing.text!r}", trailing.line, trailing.col)
        formulas.append(f)

    return System(
        tuple(formulas),
        tuple(var_index),
        tuple(param_index),
    )


def _format_formula(f: Formula, system: System) -> str:
    if isinstance(f, Const):
        return str(f.value)
    if isinstance(f, Var):
        return system.var_names[f.index]
    if isinstance(f, Param):
        name = system.param_names[f.index]
        return f"!?{name}" if f.negated else f"?{name}"
    if isinstance(f, And):
        left = _format_formula(f.left, system)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = _format_formula(f.right, system)
        if isinstance(f.right, (Or, And)):
            right = f"({right})"
        return f"{left} & {right}"
    left = _format_formula(f.left, system)
    right = _format_formula(f.right, system)
    if isinstance(f.right, Or):
        right = f"({right})"
    return f"{left} | {right}"


def format_system(system: System) -> str:
    """Render a System in BES syntax; parsing the result reproduces it exactly."""
    lines = [
        f"{system.var_names[i]} = {_format_formula(system.formulas[i], system)};"
        for i in range(system.n)
    ]
    return "\n".join(lines) + "\n"
