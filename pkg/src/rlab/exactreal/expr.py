"""Constant expression trees and their text grammar.

Grammar (whitespace ignored)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := INT | INT '/' INT | 'sqrt(' expr ')' | 'norm(' expr ')'
            | '(' expr ')' | '-' factor

``norm(x)`` is the distance from ``x`` to the nearest integer.  ``INT '/' INT``
binds tighter than ``*``/``/`` so ``2*3/64`` reads as ``2 * (3/64)``; the value
is the same either way.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..errors import ParseError
from .radical import RadicalForm


class ConstExpr:
    """Base class of immutable exact constants."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    @cached_property
    def radical_form(self) -> RadicalForm | None:
        """Exact canonical form, or ``None`` when the value leaves the
        supported radical field (e.g. nested irrational square roots)."""
        return self._radical()

    def _radical(self) -> RadicalForm | None:  # pragma: no cover - abstract
        raise NotImplementedError

    def rational_value(self) -> Fraction | None:
        rf = self.radical_form
        if rf is not None and rf.is_rational:
            return rf.rational_part
        return None

    def is_rational(self) -> bool:
        return self.rational_value() is not None

    def __str__(self) -> str:
        return _render(self, 0)

    def __float__(self) -> float:
        from .interval import eval_interval

        iv = eval_interval(self, 60)
        return float(iv.midpoint)


@dataclass(frozen=True, eq=True, repr=False)
class Int(ConstExpr):
    value: int

    def _radical(self):
        return RadicalForm.rational(self.value)

    def __repr__(self):
        return f"Int({self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class Rat(ConstExpr):
    num: int
    den: int

    def __post_init__(self):
        if self.den == 0:
            from ..errors import DivideByZero

            raise DivideByZero("zero denominator in rational literal")
        q = Fraction(self.num, self.den)
        object.__setattr__(self, "num", q.numerator)
        object.__setattr__(self, "den", q.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def _radical(self):
        return RadicalForm.rational(self.value)

    def __repr__(self):
        return f"Rat({self.num}, {self.den})"


@dataclass(frozen=True, eq=True)
class Sqrt(ConstExpr):
    arg: ConstExpr

    def _radical(self):
        inner = self.arg.radical_form
        if inner is None or not inner.is_rational:
            return None
        if inner.rational_part < 0:
            return None
        return inner.sqrt()


@dataclass(frozen=True, eq=True)
class Neg(ConstExpr):
    arg: ConstExpr

    def _radical(self):
        inner = self.arg.radical_form
        return None if inner is None else -inner


@dataclass(frozen=True, eq=True)
class Add(ConstExpr):
    left: ConstExpr
    right: ConstExpr

    def _radical(self):
        a, b = self.left.radical_form, self.right.radical_form
        return None if a is None or b is None else a + b


@dataclass(frozen=True, eq=True)
class Sub(ConstExpr):
    left: ConstExpr
    right: ConstExpr

    def _radical(self):
        a, b = self.left.radical_form, self.right.radical_form
        return None if a is None or b is None else a - b


@dataclass(frozen=True, eq=True)
class Mul(ConstExpr):
    left: ConstExpr
    right: ConstExpr

    def _radical(self):
        a, b = self.left.radical_form, self.right.radical_form
        return None if a is None or b is None else a * b


@dataclass(frozen=True, eq=True)
class Div(ConstExpr):
    left: ConstExpr
    right: ConstExpr

    def _radical(self):
        a, b = self.left.radical_form, self.right.radical_form
        if a is None or b is None or b.is_zero:
            return None
        inv = b.inverse()
        return None if inv is None else a * inv


@dataclass(frozen=True, eq=True)
class Norm(ConstExpr):
    """Torus norm: distance from ``arg`` to the nearest integer."""

    arg: ConstExpr

    def _radical(self):
        inner = self.arg.radical_form
        if inner is None:
            return None
        if inner.is_rational:
            q = inner.rational_part
            frac = q - (q.numerator // q.denominator)
            return RadicalForm.rational(min(frac, 1 - frac))
        k = (inner + RadicalForm.rational(Fraction(1, 2))).floor()
        diff = inner - RadicalForm.rational(k)
        return diff if diff.sign() > 0 else -diff


ZERO = Int(0)
ONE = Int(1)


def as_expr(x) -> ConstExpr:
    if isinstance(x, ConstExpr):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a constant")
    if isinstance(x, int):
        return Int(x)
    if isinstance(x, Fraction):
        return Int(x.numerator) if x.denominator == 1 else Rat(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot convert {type(x).__name__} to ConstExpr")


def from_radical(rf: RadicalForm) -> ConstExpr:
    """Rebuild an expression from a canonical form."""
    out: ConstExpr | None = None
    for r, c in sorted(rf.terms.items()):
        term = as_expr(c) if r == 1 else _scaled_sqrt(c, r)
        if out is None:
            out = term
        elif isinstance(term, Neg):
            out = Sub(out, term.arg)
        else:
            out = Add(out, term)
    return out if out is not None else ZERO


def _scaled_sqrt(c: Fraction, r: int) -> ConstExpr:
    root = Sqrt(Int(r))
    mag = abs(c)
    if mag == 1:
        node: ConstExpr = root
    elif mag.denominator == 1:
        node = Mul(Int(mag.numerator), root)
    elif mag.numerator == 1:
        node = Div(root, Int(mag.denominator))
    else:
        node = Mul(Rat(mag.numerator, mag.denominator), root)
    return Neg(node) if c < 0 else node


# -- rendering ------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3}


def _render(e: ConstExpr, ctx: int) -> str:
    if isinstance(e, Int):
        s = str(e.value)
        return f"({s})" if e.value < 0 and ctx > 0 else s
    if isinstance(e, Rat):
        s = f"{e.num}/{e.den}"
        if e.num < 0:
            return f"({s})" if ctx > 0 else s
        return f"({s})" if ctx >= 2 else s
    if isinstance(e, Sqrt):
        return f"sqrt({_render(e.arg, 0)})"
    if isinstance(e, Norm):
        return f"norm({_render(e.arg, 0)})"
    if isinstance(e, Neg):
        s = "-" + _render(e.arg, 3)
        return f"({s})" if ctx > 1 else s
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        s = f"{_render(e.left, 1)} {op} {_render(e.right, 2)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        s = f"{_render(e.left, 2)}{op}{_render(e.right, 3)}"
        return f"({s})" if ctx > 2 else s
    raise TypeError(type(e))


# -- parsing ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt|norm)\s*\(|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace can fail here
            break
        pos = m.end()
        if m.group(1) is not None:
            out.append(("INT", m.group(1)))
        elif m.group(2) is not None:
            out.append(("FUNC", m.group(2)))
        else:
            ch = m.group(3)
            if ch.isspace():
                continue
            if ch not in "+-*/()":
                raise ParseError(f"unexpected character {ch!r} in {text!r}")
            out.append(("OP", ch))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(f"expected {want} at token {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self) -> ConstExpr:
        node = self.term()
        while self.peek() in (("OP", "+"), ("OP", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> ConstExpr:
        node = self.factor()
        while self.peek() in (("OP", "*"), ("OP", "/")):
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> ConstExpr:
        kind, val = self.peek()
        if kind == "INT":
            self.take()
            n = int(val)
            nxt = self.toks[self.i : self.i + 2]
            if len(nxt) == 2 and nxt[0] == ("OP", "/") and nxt[1][0] == "INT":
                self.i += 2
                return Rat(n, int(nxt[1][1]))
            return Int(n)
        if kind == "FUNC":
            self.take()
            inner = self.expr()
            self.take("OP", ")")
            return Sqrt(inner) if val == "sqrt" else Norm(inner)
        if (kind, val) == ("OP", "("):
            self.take()
            inner = self.expr()
            self.take("OP", ")")
            return inner
        if (kind, val) == ("OP", "-"):
            self.take()
            return Neg(self.factor())
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str) -> ConstExpr:
    """Parse the constant grammar; raises :class:`ParseError`."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty constant expression")
    p = _Parser(text)
    node = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return node
