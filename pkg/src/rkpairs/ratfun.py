"""Rational functions over the extension field.

The admissible class requires degree caps, coprime numerator and
denominator, and an irreducible monic factor (other than x) of the
product whose exact multiplicity is coprime to the unit-group order.
Also: the exceptional set (zeros of either part) and safe evaluation.
"""

import string
from dataclasses import dataclass

from . import fqpoly
from .ffield import ExtField, FieldCtx


@dataclass(frozen=True)
class RatFunc:
    """Reduced fraction of polynomials: gcd(num, den) = 1, den monic."""

    num: tuple
    den: tuple

    @property
    def degrees(self):
        return fqpoly.deg(self.num), fqpoly.deg(self.den)

    def __str__(self):
        return self._text if hasattr(self, "_text") else repr(self)


def make_ratfunc(K, num, den) -> RatFunc:
    if fqpoly.is_zero(den):
        raise ZeroDivisionError("denominator is zero")
    g = fqpoly.poly_gcd(K, num, den)
    if fqpoly.deg(g) > 0:
        num = fqpoly.divexact(K, num, g)
        den = fqpoly.divexact(K, den, g)
    lead = den[-1]
    if lead != K.one:
        inv = K.inv(lead)
        num = fqpoly.scale(K, num, inv)
        den = fqpoly.scale(K, den, inv)
    return RatFunc(num=num, den=den)


def evaluate(ctx: FieldCtx, F: RatFunc, alpha):
    """F1(alpha) / F2(alpha); the point must not be a pole."""
    K = ExtField(ctx)
    den = fqpoly.eval_poly(K, F.den, alpha)
    if den == K.zero:
        raise ZeroDivisionError("evaluation at a pole")
    num = fqpoly.eval_poly(K, F.num, alpha)
    return ctx.mul(num, ctx.inv_elem(den)) if den != K.one else num


SCAN_CAP = 1 << 24


def exceptional_set(ctx: FieldCtx, F: RatFunc, method: str = "auto"):
    """Elements where the numerator or denominator vanishes.

    Full scan below SCAN_CAP, root extraction from the factorization
    above it; both paths are available for cross-checking.
    """
    K = ExtField(ctx)
    if method not in ("auto", "scan", "factor"):
        raise ValueError("method must be auto, scan or factor")
    if method == "auto":
        method = "scan" if K.order <= SCAN_CAP else "factor"
    out = set()
    if method == "scan":
        for alpha in ctx.elements():
            if fqpoly.eval_poly(K, F.num, alpha) == K.zero or fqpoly.eval_poly(K, F.den, alpha) == K.zero:
                out.add(alpha)
    else:
        for part in (F.num, F.den):
            if fqpoly.deg(part) >= 1:
                out.update(fqpoly.roots(K, part, seed=ctx.seed))
    return out


def in_upsilon(ctx: FieldCtx, F: RatFunc, m1: int, m2: int,
               unit_order: "int | None" = None, seed: int = 0):
    """Admissibility test; returns (verdict, witness) with witness = (g, mult).

    unit_order defaults to q^n - 1 (coefficients live in the extension
    field); passing q - 1 gives the base-field variant of the class.
    """
    K = ExtField(ctx)
    if unit_order is None:
        unit_order = K.order - 1
    d1, d2 = F.degrees
    if d1 > m1 or d2 > m2:
        return False, None
    if fqpoly.deg(fqpoly.poly_gcd(K, F.num, F.den)) > 0:
        return False, None  # unreachable for reduced fractions, kept for raw input
    product = fqpoly.mul(K, F.num, F.den)
    if fqpoly.deg(product) < 1:
        return False, None
    x_poly = fqpoly.monomial(K, 1)
    from math import gcd

    for g, mult in fqpoly.factor_poly(K, product, seed=seed):
        if g == x_poly:
            continue
        if gcd(mult, unit_order) == 1:
            return True, (g, mult)
    return False, None


# ---------------------------------------------------------------------------
# text syntax: polynomials and rational functions in x with generator symbol a

class ParseError(ValueError):
    """Syntax error with a character position for diagnostics."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = []
        i = 0
        while i < len(text):
            c = text[i]
            if c in " \t":
                i += 1
                continue
            if c in "+-*/^()":
                self.items.append((c, c, i))
                i += 1
                continue
            if c in string.digits:
                j = i
                while j < len(text) and text[j] in string.digits:
                    j += 1
                self.items.append(("int", int(text[i:j]), i))
                i = j
                continue
            if c in ("x", "a"):
                self.items.append(("name", c, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {c!r}", i)
        self.items.append(("end", None, len(text)))
        self.pos = 0

    def peek(self):
        return self.items[self.pos]

    def next(self):
        tok = self.items[self.pos]
        self.pos += 1
        return tok


class _RationalParser:
    """Recursive descent over +, -, *, /, ^ with values as poly fractions."""

    def __init__(self, K, text: str):
        self.K = K
        self.toks = _Tokens(text)

    def parse(self):
        value = self._expr()
        kind, _, pos = self.toks.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def _expr(self):
        value = self._term()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "+":
                self.toks.next()
                value = self._add(value, self._term())
            elif kind == "-":
                self.toks.next()
                value = self._add(value, self._neg(self._term()))
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            kind, _, pos = self.toks.peek()
            if kind == "*":
                self.toks.next()
                value = self._mul(value, self._factor())
            elif kind == "/":
                self.toks.next()
                value = self._div(value, self._factor(), pos)
            else:
                return value

    def _factor(self):
        kind, _, pos = self.toks.peek()
        if kind == "-":
            self.toks.next()
            return self._neg(self._factor())
        value = self._atom()
        kind, _, pos = self.toks.peek()
        if kind == "^":
            self.toks.next()
            k2, v2, p2 = self.toks.next()
            if k2 != "int":
                raise ParseError("exponent must be a nonnegative integer", p2)
            value = self._pow(value, v2)
        return value

    def _atom(self):
        kind, val, pos = self.toks.next()
        K = self.K
        if kind == "int":
            return (fqpoly.constant(K, K.from_int(val % K.char)), (K.one,))
        if kind == "name":
            if val == "x":
                return (fqpoly.monomial(K, 1), (K.one,))
            return (fqpoly.constant(K, K.generator()), (K.one,))
        if kind == "(":
            value = self._expr()
            k2, _, p2 = self.toks.next()
            if k2 != ")":
                raise ParseError("unbalanced parenthesis", p2)
            return value
        raise ParseError("expected a number, x, a or parenthesis", pos)

    # fraction arithmetic on (num, den) pairs
    def _add(self, u, v):
        K = self.K
        num = fqpoly.add(K, fqpoly.mul(K, u[0], v[1]), fqpoly.mul(K, v[0], u[1]))
        return (num, fqpoly.mul(K, u[1], v[1]))

    def _neg(self, u):
        return (fqpoly.scale(self.K, u[0], self.K.neg(self.K.one)), u[1])

    def _mul(self, u, v):
        K = self.K
        return (fqpoly.mul(K, u[0], v[0]), fqpoly.mul(K, u[1], v[1]))

    def _div(self, u, v, pos):
        if fqpoly.is_zero(v[0]):
            raise ParseError("division by the zero polynomial", pos)
        K = self.K
        return (fqpoly.mul(K, u[0], v[1]), fqpoly.mul(K, u[1], v[0]))

    def _pow(self, u, e):
        K = self.K
        num, den = (K.one,), (K.one,)
        for _ in range(e):
            num = fqpoly.mul(K, num, u[0])
            den = fqpoly.mul(K, den, u[1])
        return (num, den)


def parse_ratfunc(ctx: FieldCtx, text: str) -> RatFunc:
    """Parse `(x^2+a*x+3)/(x+1)`-style syntax over F_{q^n}."""
    K = ExtField(ctx)
    num, den = _RationalParser(K, text).parse()
    F = make_ratfunc(K, num, den)
    object.__setattr__(F, "_text", text)
    return F


def format_ratfunc(ctx: FieldCtx, F: RatFunc) -> str:
    K = ExtField(ctx)
    num = fqpoly.format_poly(K, F.num)
    if fqpoly.deg(F.den) < 1 and F.den == (K.one,):
        return num
    return f"({num})/({fqpoly.format_poly(K, F.den)})"
