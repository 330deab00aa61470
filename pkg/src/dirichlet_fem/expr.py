"""A small closed expression language for problem data on the plane.

Grammar: floating literals, the variables x and y, the constant pi,
the functions sin, cos, exp, sqrt, abs, the binary operators + - * / ^
(^ is right-associative power), unary minus, and parentheses.  Unary
minus binds tighter than * and / but looser than ^, so -x^2 means
-(x^2) while -x*y means (-x)*y.

The language is deliberately tiny: every expression a problem file can
contain is parsed into the AST here and evaluated by walking it, so no
text from a problem file is ever handed to Python's own eval.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

__all__ = [
    "Num",
    "Name",
    "Unary",
    "Binary",
    "Call",
    "Expr",
    "ParseError",
    "EvalError",
    "parse",
    "evaluate",
    "serialize",
    "as_function",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    ident: str  # "x", "y", or "pi"


@dataclass(frozen=True)
class Unary:
    op: str  # only "-"
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str  # one of sin cos exp sqrt abs
    arg: "Expr"


Expr = Union[Num, Name, Unary, Binary, Call]


class ParseError(ValueError):
    """Bad expression text; offsets count bytes from the start."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalError(ValueError):
    """Evaluation hit a domain error or a non-finite value."""

    def __init__(self, message: str, point: tuple[float, float]):
        super().__init__(f"{message} at ({point[0]}, {point[1]})")
        self.point = point


_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}

_CONSTANTS = {"pi": math.pi}

_PRECEDENCE = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_RIGHT_ASSOC = {"^"}
_UNARY_PRECEDENCE = 25

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        pos = m.end()
        for kind in ("num", "ident", "op"):
            text = m.group(kind)
            if text is not None:
                tokens.append((kind, text, m.start(kind)))
                break
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expression(self, min_prec: int) -> Expr:
        left = self.primary()
        while True:
            kind, text, _ = self.peek()
            if kind != "op" or text not in _PRECEDENCE:
                break
            prec = _PRECEDENCE[text]
            if prec < min_prec:
                break
            self.advance()
            right = self.expression(prec if text in _RIGHT_ASSOC else prec + 1)
            left = Binary(text, left, right)
        return left

    def primary(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                if text not in _FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", offset)
                self.advance()
                arg = self.expression(0)
                self.expect_close()
                return Call(text, arg)
            if text in _FUNCTIONS:
                raise ParseError(
                    f"function {text!r} needs parenthesized argument", offset
                )
            if text == "x" or text == "y" or text in _CONSTANTS:
                return Name(text)
            raise ParseError(f"unknown name {text!r}", offset)
        if kind == "op":
            if text == "(":
                inner = self.expression(0)
                self.expect_close()
                return inner
            if text == "-":
                return Unary("-", self.expression(_UNARY_PRECEDENCE))
        if kind == "end":
            raise ParseError("unexpected end of expression", offset)
        raise ParseError(f"unexpected token {text!r}", offset)

    def expect_close(self):
        kind, text, offset = self.advance()
        if (kind, text) != ("op", ")"):
            raise ParseError("expected ')'", offset)


def parse(source: str) -> Expr:
    """Parse expression text, raising ParseError with a byte offset."""
    parser = _Parser(_tokenize(source))
    expr = parser.expression(0)
    kind, text, offset = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {text!r} after expression", offset)
    return expr


def evaluate(expr: Expr, x: float, y: float) -> float:
    """Evaluate at a point; domain errors and non-finite results raise."""
    point = (x, y)
    value = _eval(expr, x, y, point)
    if not math.isfinite(value):
        raise EvalError(f"expression value is {value!r}", point)
    return value


def _eval(expr: Expr, x: float, y: float, point: tuple[float, float]) -> float:
    t = type(expr)
    if t is Num:
        return expr.value
    if t is Name:
        if expr.ident == "x":
            return x
        if expr.ident == "y":
            return y
        return _CONSTANTS[expr.ident]
    if t is Unary:
        return -_eval(expr.operand, x, y, point)
    if t is Binary:
        a = _eval(expr.left, x, y, point)
        b = _eval(expr.right, x, y, point)
        op = expr.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise EvalError("division by zero", point)
            return a / b
        try:
            return math.pow(a, b)
        except (ValueError, OverflowError) as exc:
            raise EvalError(f"cannot raise {a!r} to power {b!r}", point) from exc
    # Call
    a = _eval(expr.arg, x, y, point)
    try:
        return _FUNCTIONS[expr.func](a)
    except (ValueError, OverflowError) as exc:
        raise EvalError(f"{expr.func}({a!r}) is undefined", point) from exc


def _node_precedence(expr: Expr) -> int:
    t = type(expr)
    if t is Binary:
        return _PRECEDENCE[expr.op]
    if t is Unary:
        return _UNARY_PRECEDENCE
    if t is Num and expr.value < 0:
        return _UNARY_PRECEDENCE  # prints with a leading minus
    return 100


def serialize(expr: Expr) -> str:
    """Render with the fewest parentheses that preserve the parse.

    For ASTs produced by parse (literals are nonnegative there) the
    round trip parse(serialize(e)) == e is exact.
    """
    t = type(expr)
    if t is Num:
        if not math.isfinite(expr.value):
            raise ValueError(f"cannot serialize non-finite literal {expr.value!r}")
        return repr(expr.value)
    if t is Name:
        return expr.ident
    if t is Call:
        return f"{expr.func}({serialize(expr.arg)})"
    if t is Unary:
        return "-" + _child(expr.operand, _UNARY_PRECEDENCE)
    prec = _PRECEDENCE[expr.op]
    if expr.op in _RIGHT_ASSOC:
        left = _child(expr.left, prec + 1)
        right = _child(expr.right, prec)
    else:
        left = _child(expr.left, prec)
        right = _child(expr.right, prec + 1)
    return f"{left}{expr.op}{right}"


def _child(expr: Expr, min_prec: int) -> str:
    text = serialize(expr)
    if _node_precedence(expr) < min_prec:
        return f"({text})"
    return text


def as_function(expr: Expr) -> Callable[[float, float], float]:
    """Wrap an expression as a plain (x, y) -> float callable."""
    return lambda x, y: evaluate(expr, x, y)
