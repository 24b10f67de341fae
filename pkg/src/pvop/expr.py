"""Recursive-descent parser for constraint expressions.

Grammar (``x1`` is the first variable)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | power
    power  := atom ('^' INT)*
    atom   := NUMBER | 'x' INDEX | '(' expr ')' | 'exp' '(' expr ')'

Unary minus is accepted as a convenience and binds looser than ``^``, so
``-x1^2`` means ``-(x1^2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .poly import Polynomial


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # zero-based


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of '+', '-', '*'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Exp:
    arg: "Expr"


Expr = Const | Var | Neg | BinOp | Pow | Exp

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<var>x(?P<idx>\d+))"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError("unexpected character", text, pos + skip)
        chunk = text[pos:m.end()]
        start = pos + len(chunk) - len(chunk.lstrip())
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), start))
        elif m.group("var") is not None:
            tokens.append(("var", m.group("idx"), start))
        elif m.group("name") is not None:
            if m.group("name") != "exp":
                raise ExprSyntaxError(f"unknown identifier {m.group('name')!r}", text, start)
            tokens.append(("exp", "exp", start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if kind != "op" or val != value:
            raise ExprSyntaxError(f"expected {value!r}", self.text, pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ExprSyntaxError("exponent must be a non-negative integer", self.text, pos)
            node = Pow(node, int(val))
        return node

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "var":
            idx = int(val)
            if idx < 1:
                raise ExprSyntaxError("variables are numbered from x1", self.text, pos)
            return Var(idx - 1)
        if kind == "exp":
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return Exp(node)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError("unexpected token" if kind != "end" else "unexpected end of input",
                              self.text, pos)


def parse_constraint(text: str) -> Expr:
    parser = _Parser(text)
    node = parser.expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError("trailing input", text, pos)
    return node


def to_text(node: Expr) -> str:
    """Fully parenthesised rendering that parses back to the same tree."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Neg):
        return f"-({to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)})^{node.exponent}"
    if isinstance(node, Exp):
        return f"exp({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def max_variable(node: Expr) -> int:
    """Largest zero-based variable index used, or -1."""
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Const):
        return -1
    if isinstance(node, (Neg, Exp)):
        return max_variable(node.arg)
    if isinstance(node, Pow):
        return max_variable(node.base)
    return max(max_variable(node.left), max_variable(node.right))


def evaluate_expr(node: Expr, x):
    """Evaluate at ``x`` of shape ``(n,)`` or a batch ``(m, n)``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(node, x)
    return float(out) if x.ndim == 1 else np.broadcast_to(out, x.shape[:-1]).astype(float)


def _eval(node: Expr, x: np.ndarray):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        if node.index >= x.shape[-1]:
            raise ValueError(f"x{node.index + 1} used with only {x.shape[-1]} coordinates")
        return x[..., node.index]
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, Pow):
        return _eval(node.base, x) ** node.exponent
    if isinstance(node, Exp):
        return np.exp(_eval(node.arg, x))
    a, b = _eval(node.left, x), _eval(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b


def expr_to_polynomial(node: Expr, n: int) -> Polynomial:
    """Expand a polynomial expression; ``exp`` nodes are rejected."""
    if isinstance(node, Const):
        return Polynomial.constant(n, node.value)
    if isinstance(node, Var):
        if node.index >= n:
            raise ValueError(f"x{node.index + 1} used with only {n} variables")
        return Polynomial.variable(n, node.index)
    if isinstance(node, Neg):
        return -expr_to_polynomial(node.arg, n)
    if isinstance(node, Pow):
        return expr_to_polynomial(node.base, n) ** node.exponent
    if isinstance(node, Exp):
        raise ValueError("exp(...) is not a polynomial")
    a, b = expr_to_polynomial(node.left, n), expr_to_polynomial(node.right, n)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b
