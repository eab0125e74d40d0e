"""Expression language for ``kpa eval``.

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := coeff | "p(" vertex ")" | "s(" path ")" | "st(" path ")" | "(" expr ")"

Coefficients are integers, fractions ``a/b``, or (for Laurent rings) the
variables ``x``/``y`` with an optional ``^exponent``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import AlgebraElement, KPAlgebra
from .errors import KPAError, ParseError, UnknownEdge

_TOKEN = re.compile(
    r"\s*(?:(?P<gen>st|s|p)\(\s*(?P<arg>[^()\s]*)\s*\)"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<var>[a-z])(?![a-z(])(?:\^(?P<exp>[+-]?\d+))?"
    r"|(?P<op>[-+*()]))"
)


@dataclass
class _Tok:
    kind: str
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input {text[pos:pos + 10]!r}", 1, pos + 1)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("gen"):
            toks.append(_Tok(m.group("gen"), m.group("arg"), start))
        elif m.group("num"):
            toks.append(_Tok("num", m.group("num"), start))
        elif m.group("var"):
            toks.append(_Tok("var", (m.group("var"), int(m.group("exp") or 1)), start))
        else:
            toks.append(_Tok(m.group("op"), None, start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, alg: KPAlgebra, text: str):
        self.alg = alg
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i].kind if self.i < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str):
        pos = self.toks[self.i].pos + 1 if self.i < len(self.toks) else None
        raise ParseError(msg, 1, pos)

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression", 1, 1)
        val = self.expr()
        if self.i != len(self.toks):
            self.fail("unexpected trailing input")
        return val

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take().kind == "-" else 1
        val = self.term()
        if sign < 0:
            val = _neg(self.alg, val)
        while self.peek() in ("+", "-"):
            op = self.take().kind
            rhs = self.term()
            val = _add(self.alg, val, rhs if op == "+" else _neg(self.alg, rhs))
        return val

    def term(self):
        val = self.factor()
        while self.peek() == "*":
            self.take()
            val = _mul(self.alg, val, self.factor())
        return val

    def factor(self):
        kind = self.peek()
        if kind is None:
            self.fail("unexpected end of expression")
        tok = self.take()
        alg = self.alg
        R = alg.ring
        try:
            if kind == "p":
                return alg.p(tok.value)
            if kind == "s":
                return alg.s(tok.value)
            if kind == "st":
                return alg.st(tok.value)
        except KPAError as exc:
            if isinstance(exc, UnknownEdge):
                raise
            raise ParseError(str(exc), 1, tok.pos + 1) from exc
        if kind == "num":
            return R.parse(tok.value)
        if kind == "var":
            name, power = tok.value
            if R.spec.kind != "laurent" or name not in R.names:
                raise ParseError(f"variable {name!r} needs a Laurent coefficient ring", 1, tok.pos + 1)
            return R.gen(R.names.index(name), power)
        if kind == "(":
            val = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return val
        self.i -= 1
        self.fail(f"unexpected token {kind!r}")


def _neg(alg: KPAlgebra, a):
    return -a if isinstance(a, AlgebraElement) else alg.ring.neg(a)


def _add(alg: KPAlgebra, a, b):
    if isinstance(a, AlgebraElement) or isinstance(b, AlgebraElement):
        a = a if isinstance(a, AlgebraElement) else alg.scalar(a)
        b = b if isinstance(b, AlgebraElement) else alg.scalar(b)
        return a + b
    return alg.ring.add(a, b)


def _mul(alg: KPAlgebra, a, b):
    if isinstance(a, AlgebraElement):
        return a * b
    if isinstance(b, AlgebraElement):
        return b.__rmul__(a)
    return alg.ring.mul(a, b)


def evaluate(alg: KPAlgebra, text: str) -> AlgebraElement:
    """Parse and evaluate ``text``; a bare coefficient c means c·1."""
    val = _Parser(alg, text).parse()
    return val if isinstance(val, AlgebraElement) else alg.scalar(val)
