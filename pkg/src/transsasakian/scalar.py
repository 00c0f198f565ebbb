"""Exact scalar fields over the chart coordinates ``x, y, z``.

Scalars are plain sympy expressions restricted to a small grammar: rational
constants, the three coordinates, ``+ - *``, integer powers, and
``exp``/``sin``/``cos`` of rational-linear forms in the coordinates.  Division
is only allowed by *units* (nonzero rationals times exponential atoms), so
every denominator that ever appears is structurally nonzero.

The canonical form is the fully expanded expression: a sum of monomials
``c * x^a y^b z^c * exp(L) * prod(trig)`` with like terms merged.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

__all__ = [
    "COORDS",
    "ExprSyntaxError",
    "GrammarError",
    "ZeroTest",
    "canonical",
    "check_grammar",
    "diff",
    "divide",
    "evaluate",
    "is_constant",
    "is_unit",
    "is_zero",
    "parse",
    "sample_points",
    "to_rational",
    "to_text",
]

X, Y, Z = sp.symbols("x y z", real=True)
COORDS: tuple[sp.Symbol, sp.Symbol, sp.Symbol] = (X, Y, Z)
_BY_NAME = {s.name: s for s in COORDS}
_FUNCS = {"exp": sp.exp, "sin": sp.sin, "cos": sp.cos}

NUMERIC_POINTS = 16
NUMERIC_TOL = 1e-9
NUMERIC_SEED = 20201


class GrammarError(ValueError):
    """An expression falls outside the supported scalar grammar."""


class ExprSyntaxError(GrammarError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3) + 1)
            tokens.append(("op", ch, m.start(3)))
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
        if val != value or kind == "end":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", pos + 1)

    def parse(self) -> sp.Expr:
        if self.peek()[0] == "end":
            raise ExprSyntaxError("empty expression", 1)
        expr = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos + 1)
        return expr

    def sum(self) -> sp.Expr:
        expr = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.product()
            expr = expr + rhs if op == "+" else expr - rhs
        return expr

    def product(self) -> sp.Expr:
        expr = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                expr = expr * rhs
            else:
                if not is_unit(rhs):
                    raise ExprSyntaxError(
                        "division only by nonzero rationals and exp terms", pos + 1
                    )
                expr = expr * _unit_inverse(rhs)
        return expr

    def unary(self) -> sp.Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            operand = self.unary()
            return -operand if val == "-" else operand
        return self.power()

    def power(self) -> sp.Expr:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            if self.peek()[1] in ("-", "+") and self.peek()[0] == "op":
                sign = -1 if self.take()[1] == "-" else 1
            kind, val, epos = self.take()
            if kind != "num":
                raise ExprSyntaxError("exponent must be an integer literal", epos + 1)
            n = sign * int(val)
            if n < 0 and not is_unit(base):
                raise ExprSyntaxError(
                    "negative powers only of nonzero rationals and exp terms", pos + 1
                )
            return _unit_inverse(base) ** (-n) if n < 0 else base**n
        return base

    def atom(self) -> sp.Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return sp.Integer(int(val))
        if kind == "name":
            if val in _BY_NAME:
                return _BY_NAME[val]
            if val in _FUNCS:
                self.expect("(")
                arg_start = self.peek()[2]
                arg = self.sum()
                self.expect(")")
                if not _is_linear_form(arg):
                    raise ExprSyntaxError(
                        f"argument of {val} must be a rational-linear form in x, y, z",
                        arg_start + 1,
                    )
                return _FUNCS[val](arg)
            raise ExprSyntaxError(f"unknown name {val!r}", pos + 1)
        if kind == "op" and val == "(":
            expr = self.sum()
            self.expect(")")
            return expr
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {found}", pos + 1)


def parse(text: str) -> sp.Expr:
    """Parse ``text`` in the coefficient grammar and return its canonical form.

    >>> parse("x*exp(2*z) + 1/2")
    x*exp(2*z) + 1/2
    """
    return canonical(_Parser(text).parse())


# --------------------------------------------------------------------------
# grammar predicates


def _is_linear_form(expr: sp.Expr) -> bool:
    expr = sp.expand(expr)
    if expr == 0:
        return True
    if not expr.free_symbols <= set(COORDS):
        return False
    try:
        poly = sp.Poly(expr, *COORDS)
    except sp.PolynomialError:
        return False
    if poly.total_degree() > 1:
        return False
    if poly.coeff_monomial(1) != 0:
        return False
    return all(c.is_Rational for c in poly.coeffs())


def is_unit(expr: sp.Expr) -> bool:
    """True for nonzero rationals times products of exp atoms."""
    expr = sp.expand(expr)
    if expr.is_Rational:
        return expr != 0
    factors = expr.args if expr.is_Mul else (expr,)
    for f in factors:
        if f.is_Rational:
            continue
        if isinstance(f, sp.exp):
            continue
        if f.is_Pow and isinstance(f.base, sp.exp) and f.exp.is_Integer:
            continue
        return False
    return True


def _unit_inverse(expr: sp.Expr) -> sp.Expr:
    return sp.expand(sp.powsimp(1 / sp.expand(expr)))


def check_grammar(expr: sp.Expr) -> None:
    """Raise :class:`GrammarError` unless ``expr`` is in the scalar grammar."""
    for node in sp.preorder_traversal(expr):
        if node.is_Symbol:
            if node not in COORDS:
                raise GrammarError(f"unknown symbol {node}")
        elif node.is_Number:
            if not node.is_Rational:
                raise GrammarError(f"non-rational constant {node}")
        elif isinstance(node, (sp.exp, sp.sin, sp.cos)):
            if not _is_linear_form(node.args[0]):
                raise GrammarError(f"non-linear argument in {node}")
        elif node.is_Pow:
            if not node.exp.is_Integer:
                raise GrammarError(f"non-integer power in {node}")
            if node.exp < 0 and not is_unit(node.base):
                raise GrammarError(f"division by non-unit in {node}")
        elif not (node.is_Add or node.is_Mul):
            raise GrammarError(f"unsupported construct {node.func.__name__}")


# --------------------------------------------------------------------------
# operations


class _Foreign(Exception):
    pass


def _terms(e: sp.Expr) -> list:
    """Distribute ``e`` into a list of monomials (no ``Add`` inside)."""
    if e.is_Add:
        return [t for a in e.args for t in _terms(a)]
    if e.is_Mul:
        acc = [sp.Integer(1)]
        for f in e.args:
            acc = [a * t for a in acc for t in _terms(f)]
        return acc
    if e.is_Pow and e.exp.is_Integer:
        base = _terms(e.base)
        n = int(e.exp)
        if len(base) == 1:
            return [base[0] ** n]
        if n < 0:
            raise _Foreign
        acc = [sp.Integer(1)]
        for _ in range(n):
            acc = _terms(sp.Add(*[a * t for a in acc for t in base]))
        return acc
    if isinstance(e, sp.exp):
        if not e.args[0].is_Add:
            return [e]
        # one exp atom per coordinate
        return [sp.Mul(*[sp.exp(t) for t in sp.Add.make_args(canonical(e.args[0]))])]
    if isinstance(e, (sp.sin, sp.cos)):
        return [e]
    if e.is_Symbol or e.is_Number:
        return [e]
    raise _Foreign


def canonical(expr) -> sp.Expr:
    """Fully distributed form with like terms merged.

    Agrees with ``sympy.expand`` on the grammar but skips its numerator and
    denominator splitting, which dominates the cost on exp-heavy input.
    """
    return _canonical(sp.sympify(expr))


@lru_cache(maxsize=1 << 16)
def _canonical(expr: sp.Expr) -> sp.Expr:
    try:
        return sp.Add(*_terms(expr))
    except _Foreign:
        return sp.expand(expr)


def diff(f: sp.Expr, coord: int) -> sp.Expr:
    """Exact partial derivative along coordinate ``coord`` (1-based)."""
    if coord not in (1, 2, 3):
        raise ValueError(f"coordinate index must be 1, 2 or 3, got {coord}")
    return _diff(canonical(f), coord)


@lru_cache(maxsize=1 << 16)
def _diff(f: sp.Expr, coord: int) -> sp.Expr:
    s = COORDS[coord - 1]
    if s not in f.free_symbols:
        return sp.Integer(0)
    return canonical(sp.Add(*[_diff_term(t, s) for t in sp.Add.make_args(f)]))


def _diff_factor(f: sp.Expr, s: sp.Symbol):
    if f == s:
        return sp.Integer(1)
    if f.is_Pow and f.base == s and f.exp.is_Integer:
        return f.exp * s ** (f.exp - 1)
    if isinstance(f, (sp.exp, sp.sin, sp.cos)):
        c = f.args[0].coeff(s)
        if isinstance(f, sp.exp):
            return c * f
        return c * (sp.cos(f.args[0]) if isinstance(f, sp.sin) else -sp.sin(f.args[0]))
    return sp.diff(f, s)


def _diff_term(t: sp.Expr, s: sp.Symbol) -> sp.Expr:
    """Product rule over the factors of one monomial."""
    factors = sp.Mul.make_args(t)
    out = []
    for k, f in enumerate(factors):
        if s in f.free_symbols:
            out.append(sp.Mul(*factors[:k], _diff_factor(f, s), *factors[k + 1:]))
    return sp.Add(*out)


def divide(num: sp.Expr, den: sp.Expr) -> sp.Expr:
    if not is_unit(den):
        raise GrammarError(f"refusing to divide by non-unit {den}")
    return canonical(num * _unit_inverse(den))


def is_constant(f: sp.Expr) -> bool:
    return not sp.sympify(f).free_symbols


def to_rational(f: sp.Expr) -> Fraction:
    f = canonical(f)
    if not f.is_Rational:
        raise GrammarError(f"{f} is not a rational constant")
    return Fraction(int(f.p), int(f.q))


def evaluate(f: sp.Expr, point: Sequence) -> float:
    """IEEE double value of ``f`` at ``point`` (three coordinates)."""
    subs = {s: sp.Rational(str(v)) if isinstance(v, Fraction) else v
            for s, v in zip(COORDS, point)}
    return float(sp.sympify(f).evalf(17, subs=subs))


def to_text(f: sp.Expr) -> str:
    """Canonical text in the coefficient grammar (``^`` for powers)."""
    return sp.sstr(canonical(f), order="lex").replace("**", "^")


@dataclass(frozen=True)
class ZeroTest:
    """Outcome of :func:`is_zero`; truthy when the expression vanishes."""

    zero: bool
    numeric: bool = False

    def __bool__(self) -> bool:
        return self.zero


def sample_points(n: int = NUMERIC_POINTS, seed: int = NUMERIC_SEED) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-64, 64), 64) for _ in range(3)) for _ in range(n)]


def _numeric_zero(expr: sp.Expr) -> bool:
    terms = sp.Add.make_args(expr)
    fn = sp.lambdify(COORDS, expr, modules="math")
    term_fns = [sp.lambdify(COORDS, t, modules="math") for t in terms]
    for pt in sample_points():
        p = [float(c) for c in pt]
        value = fn(*p)
        scale = max(1.0, sum(abs(t(*p)) for t in term_fns))
        if not math.isfinite(value) or abs(value) > NUMERIC_TOL * scale:
            return False
    return True


def is_zero(f) -> ZeroTest:
    """Exact zero test with a seeded numeric fallback for trig identities."""
    expr = canonical(f)
    if expr == 0:
        return ZeroTest(True)
    if not expr.has(sp.sin, sp.cos):
        # exp-polynomial canonical forms are unique
        return ZeroTest(False)
    rewritten = sp.expand(sp.expand_trig(expr))
    if rewritten == 0 or sp.trigsimp(rewritten) == 0:
        return ZeroTest(True)
    if _numeric_zero(expr):
        return ZeroTest(True, numeric=True)
    return ZeroTest(False)


def all_zero(exprs: Iterable) -> ZeroTest:
    numeric = False
    for e in exprs:
        t = is_zero(e)
        if not t:
            return ZeroTest(False)
        numeric = numeric or t.numeric
    return ZeroTest(True, numeric)
