"""A small real-valued expression language for chart components and warping
functions.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = atom { ("^" | "**") exponent } ;
    exponent = [ "-" ] INT | "(" [ "-" ] INT ")" ;
    atom     = NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC     = "sin" | "cos" | "exp" | "log" | "sqrt" | "sinh" | "cosh" ;

``pi`` is a reserved constant.  Exponentiation binds tighter than unary minus
(``-x^2`` is ``-(x^2)``) and all binary operators associate to the left.
Expressions are evaluated over ``float`` or over :class:`Taylor2` jets.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from crwarplab.errors import DomainError, ParseError, UnknownVariable
from crwarplab.numeric import taylor

FUNCTIONS = tuple(taylor.UNARY)
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Unary, Binary, Pow]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    pos: int


def tokenize(source: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, source: str, variables: Sequence[str]):
        self.toks = tokenize(source)
        self.i = 0
        self.variables = set(variables)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(f"unexpected {what}", t.pos, expected)

    def expect(self, text: str) -> None:
        if self.tok.kind == "op" and self.tok.text == text:
            self.advance()
            return
        raise self.fail({text})

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Unary("neg", self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        while self.tok.kind == "op" and self.tok.text in ("^", "**"):
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        paren = self.tok.kind == "op" and self.tok.text == "("
        if paren:
            self.advance()
        sign = 1
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.fail({"integer exponent"})
        self.advance()
        if paren:
            self.expect(")")
        return sign * int(t.text)

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            if t.text in CONSTANTS and t.text not in self.variables:
                return Num(CONSTANTS[t.text])
            if t.text not in self.variables:
                raise UnknownVariable(t.text, t.pos)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.fail({"number", "identifier", "function", "(", "-"})


def parse(source: str, variables: Sequence[str]) -> Node:
    """Parse ``source`` into an expression tree over the declared ``variables``."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0, {"number", "identifier", "function", "(", "-"})
    bad = [v for v in variables if v in FUNCTIONS]
    if bad:
        raise ValueError(f"variable names shadow functions: {bad}")
    return _Parser(source, variables).parse()


def evaluate(node: Node, env: Mapping[str, object]):
    """Evaluate ``node``; ``env`` maps variable names to floats or jets."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownVariable(node.name, -1) from None
    if isinstance(node, Unary):
        x = evaluate(node.arg, env)
        if node.op == "neg":
            return -x
        return taylor.UNARY[node.op](x)
    if isinstance(node, Binary):
        a = evaluate(node.left, env)
        b = evaluate(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return taylor.divide(a, b)
    if isinstance(node, Pow):
        return taylor.ipow(evaluate(node.base, env), node.exponent)
    raise TypeError(f"not an expression node: {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_source(node: Node) -> str:
    """Print ``node`` so that ``parse(to_source(node))`` rebuilds the same tree."""
    return _emit(node, 0)


def _emit(node: Node, ctx: int) -> str:
    # ctx: 0 top, 1 additive, 2 multiplicative, 3 unary, 4 power base
    if isinstance(node, Num):
        text = repr(node.value)
        if text in ("inf", "nan", "-inf"):
            raise DomainError(f"non-finite literal {text}")
        if node.value < 0 or "e" in text and ctx >= 3:
            return f"({text})"
        return text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            s = "-" + _emit(node.arg, 3)
            return f"({s})" if ctx >= 3 else s
        return f"{node.op}({_emit(node.arg, 0)})"
    if isinstance(node, Pow):
        return f"{_emit(node.base, 4)}^{node.exponent}" if node.exponent >= 0 else \
            f"{_emit(node.base, 4)}^({node.exponent})"
    if isinstance(node, Binary):
        p = _PREC[node.op]
        left = _emit(node.left, p)
        right = _emit(node.right, p + 1)
        s = f"{left} {node.op} {right}"
        return f"({s})" if ctx > p else s
    raise TypeError(f"not an expression node: {node!r}")


class Expr:
    """A parsed expression bound to an ordered coordinate list."""

    def __init__(self, source: str, variables: Sequence[str]):
        self.source = source
        self.variables = tuple(variables)
        self.ast = parse(source, self.variables)

    def __repr__(self) -> str:
        return f"Expr({self.source!r}, {self.variables!r})"

    def __call__(self, *args):
        return evaluate(self.ast, dict(zip(self.variables, args)))

    def value(self, point) -> float:
        return float(self(*[float(x) for x in point]))

    def jet(self, point) -> taylor.Taylor2:
        return taylor.jet(self, point)
