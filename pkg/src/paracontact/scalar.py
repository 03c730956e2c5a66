"""Exact symbolic scalars over a coordinate chart.

A :class:`Scalar` is a finite sum of terms ``c * x1^k1 * ... * exp(q1*x1 + ...)``
with ``c`` in Q(sqrt2), non-negative integer powers and rational exponential
rates.  Terms with distinct (powers, rates) are linearly independent
functions, so the sparse dictionary representation is a normal form and
equality of Scalars is equality of functions.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .algnum import ONE, SQRT2, ZERO, AlgNum, format_algnum

__all__ = [
    "Scalar",
    "ScalarSyntaxError",
    "ChartMismatch",
    "parse_scalar",
    "parse_linear_form",
    "scalar_arith",
    "partial_derivative",
    "evaluate",
]


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None, text: str = ""):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class ChartMismatch(ValueError):
    pass


def _merge_chart(c1: tuple, c2: tuple) -> tuple:
    # constants built without a chart adapt to any chart
    if c1 == c2 or not c2:
        return c1
    if not c1:
        return c2
    raise ChartMismatch(f"chart mismatch: {c1} vs {c2}")


class Scalar:
    """Immutable exact scalar function on a chart.

    ``terms`` maps ``(powers, rates)`` to a nonzero :class:`AlgNum`, where
    ``powers`` and ``rates`` are tuples aligned with ``chart``.
    """

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Iterable[str] = (), terms: Mapping | None = None):
        chart = tuple(chart)
        clean = {}
        if terms:
            for key, c in terms.items():
                if not isinstance(c, AlgNum):
                    c = AlgNum.coerce(c)
                if c:
                    clean[key] = c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, value, chart: Iterable[str] = ()) -> Scalar:
        chart = tuple(chart)
        z = (0,) * len(chart)
        return cls(chart, {(z, (Fraction(0),) * len(chart)): AlgNum.coerce(value)})

    @classmethod
    def coord(cls, name: str, chart: Iterable[str]) -> Scalar:
        chart = tuple(chart)
        if name not in chart:
            raise ChartMismatch(f"unknown coordinate {name!r}")
        powers = tuple(1 if c == name else 0 for c in chart)
        return cls(chart, {(powers, (Fraction(0),) * len(chart)): ONE})

    @classmethod
    def exp(cls, rates: Mapping[str, Fraction], chart: Iterable[str]) -> Scalar:
        chart = tuple(chart)
        for name in rates:
            if name not in chart:
                raise ChartMismatch(f"unknown coordinate {name!r}")
        r = tuple(Fraction(rates.get(c, 0)) for c in chart)
        return cls(chart, {((0,) * len(chart), r): ONE})

    def with_chart(self, chart: Iterable[str]) -> Scalar:
        """Re-embed into a larger chart (coordinates must be a superset)."""
        chart = tuple(chart)
        if chart == self.chart:
            return self
        missing = [c for c in self.chart if c not in chart]
        if missing:
            raise ChartMismatch(f"coordinates {missing} not in {chart}")
        idx = [self.chart.index(c) if c in self.chart else None for c in chart]
        terms = {}
        for (p, r), c in self.terms.items():
            np_ = tuple(p[i] if i is not None else 0 for i in idx)
            nr = tuple(r[i] if i is not None else Fraction(0) for i in idx)
            terms[(np_, nr)] = c
        return Scalar(chart, terms)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(p) and not any(r) for p, r in self.terms)

    def constant_value(self) -> AlgNum:
        """The value of a constant Scalar; raises ValueError otherwise."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if not self.terms:
            return ZERO
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        return max((sum(p) for p, _ in self.terms), default=0)

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(other, chart) -> Scalar:
        if isinstance(other, Scalar):
            return other
        return Scalar.const(other, chart)

    def __add__(self, other):
        other = self._lift(other, self.chart)
        chart = _merge_chart(self.chart, other.chart)
        a, b = self.with_chart(chart), other.with_chart(chart)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Scalar(chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other, self.chart))

    def __rsub__(self, other):
        return self._lift(other, self.chart) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            c = AlgNum.coerce(other)
            if not c:
                return Scalar(self.chart)
            return Scalar(self.chart, {k: v * c for k, v in self.terms.items()})
        chart = _merge_chart(self.chart, other.chart)
        a, b = self.with_chart(chart), other.with_chart(chart)
        terms: dict = {}
        for (p1, r1), c1 in a.terms.items():
            for (p2, r2), c2 in b.terms.items():
                key = (
                    tuple(x + y for x, y in zip(p1, p2)),
                    tuple(x + y for x, y in zip(r1, r2)),
                )
                prod = c1 * c2
                terms[key] = terms[key] + prod if key in terms else prod
        return Scalar(chart, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero constant only."""
        if isinstance(other, Scalar):
            other = other.constant_value()
        inv = AlgNum.coerce(other).inverse()
        return self * inv

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Scalar.const(1, self.chart)
        for _ in range(k):
            result = result * self
        return result

    def divide_exact(self, divisor: Scalar) -> Scalar:
        """Exact quotient by a single-term divisor.

        The divisor must be one monomial whose powers are dominated by every
        term of ``self``; anything else raises ArithmeticError.
        """
        if len(divisor.terms) != 1:
            raise ArithmeticError(f"cannot divide exactly by {divisor}")
        chart = _merge_chart(self.chart, divisor.chart)
        a, d = self.with_chart(chart), divisor.with_chart(chart)
        ((dp, dr), dc), = d.terms.items()
        inv = dc.inverse()
        terms = {}
        for (p, r), c in a.terms.items():
            q = tuple(x - y for x, y in zip(p, dp))
            if any(x < 0 for x in q):
                raise ArithmeticError(f"{divisor} does not divide {self}")
            terms[(q, tuple(x - y for x, y in zip(r, dr)))] = c * inv
        return Scalar(chart, terms)

    # -- comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.const(other, self.chart)
            except TypeError:
                return NotImplemented
        if self.chart != other.chart:
            try:
                chart = _merge_chart(self.chart, other.chart)
            except ChartMismatch:
                return False
            return self.with_chart(chart).terms == other.with_chart(chart).terms
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_constant():
                h = hash(self.constant_value())
            else:
                h = hash((self.chart, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self):
        """Terms in the canonical order (powers, then rates, chart order)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    # -- calculus -----------------------------------------------------------------
    def diff(self, coord: str) -> Scalar:
        if coord not in self.chart:
            if not self.chart or self.is_zero():
                return Scalar(self.chart)
            raise ChartMismatch(f"unknown coordinate {coord!r}")
        i = self.chart.index(coord)
        terms: dict = {}
        for (p, r), c in self.terms.items():
            k, q = p[i], r[i]
            if q:
                key = (p, r)
                v = c * q
                terms[key] = terms[key] + v if key in terms else v
            if k:
                np_ = p[:i] + (k - 1,) + p[i + 1:]
                key = (np_, r)
                v = c * k
                terms[key] = terms[key] + v if key in terms else v
        return Scalar(self.chart, terms)

    # -- evaluation -----------------------------------------------------------------
    def is_exact_at(self, point: Mapping[str, object]) -> bool:
        pt = _point_values(self.chart, point)
        return all(sum((q * x for q, x in zip(r, pt)), Fraction(0)) == 0 for _, r in self.terms)

    def __call__(self, point: Mapping[str, object]):
        return evaluate(self, point)

    # -- printing ----------------------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _point_values(chart, point) -> list[Fraction]:
    vals = []
    for c in chart:
        if c not in point:
            raise ValueError(f"point does not assign coordinate {c!r}")
        vals.append(Fraction(point[c]))
    return vals


def evaluate(s: Scalar, point: Mapping[str, object]):
    """Value of ``s`` at a rational point.

    Returns an exact :class:`AlgNum` when every exponential factor has a zero
    argument at the point; otherwise a float computed in double precision
    (relative error a few ulps per term).
    """
    pt = _point_values(s.chart, point)
    exact = ZERO
    approx = 0.0
    inexact = False
    for (p, r), c in s.terms.items():
        mono = Fraction(1)
        for k, x in zip(p, pt):
            if k:
                mono *= x ** k
        arg = sum((q * x for q, x in zip(r, pt)), Fraction(0))
        if arg == 0:
            exact = exact + c * mono
        else:
            inexact = True
            approx += float(c) * float(mono) * math.exp(float(arg))
    if inexact:
        return float(exact) + approx
    return exact


def partial_derivative(s: Scalar, coord: str) -> Scalar:
    return s.diff(coord)


def scalar_arith(op: str, lhs: Scalar, rhs: Scalar | None = None) -> Scalar:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# printing


def _format_rate(q: Fraction, name: str) -> str:
    if q == 1:
        return name
    if q == -1:
        return f"-{name}"
    return f"{q}*{name}"


def format_scalar(s: Scalar) -> str:
    if not s.terms:
        return "0"
    pieces = []
    for (p, r), c in s.sorted_terms():
        factors = []
        for name, k in zip(s.chart, p):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        rates = [_format_rate(q, name) for name, q in zip(s.chart, r) if q]
        if rates:
            arg = " + ".join(rates).replace("+ -", "- ")
            factors.append(f"exp({arg})")
        negative = c.sign() < 0
        mag = -c if negative else c
        if mag == ONE and factors:
            body = "*".join(factors)
        else:
            body = "*".join([format_algnum(mag)] + factors)
        pieces.append((negative, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for negative, body in pieces[1:]:
        out += (" - " if negative else " + ") + body
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ScalarSyntaxError(f"unexpected character {text[bad]!r}", bad, text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: tuple, symbols: tuple = ()):
        self.text = text
        self.chart = chart
        self.symbols = symbols
        self.full = chart + symbols
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ScalarSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            self.error(f"expected {value!r}, got {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Scalar:
        if self.peek()[0] == "end":
            self.error("empty expression")
        s = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return s

    def expr(self) -> Scalar:
        s = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = self.term()
            s = s + t if op == "+" else s - t
        return s

    def term(self) -> Scalar:
        s = self.unary()
        while self.peek()[1] in ("*", "/"):
            tok = self.next()
            t = self.unary()
            if tok[1] == "*":
                s = s * t
            else:
                if not t.is_constant() or t.is_zero():
                    self.error("division only by a nonzero constant", tok)
                s = s / t.constant_value()
        return s

    def unary(self) -> Scalar:
        tok = self.peek()
        if tok[1] == "-":
            self.next()
            return -self.unary()
        if tok[1] == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        if self.peek()[1] == "^":
            self.next()
            tok = self.next()
            if tok[0] != "num" or not tok[1].isdigit():
                self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Scalar:
        tok = self.next()
        kind, val, pos = tok
        if kind == "num":
            return Scalar.const(Fraction(val), self.full)
        if kind == "name":
            if val == "sqrt2":
                return Scalar.const(SQRT2, self.full)
            if val == "exp":
                return self.exp_call(tok)
            if val in self.full:
                return Scalar.coord(val, self.full)
            self.error(f"unknown coordinate name {val!r}", tok)
        if val == "(":
            s = self.expr()
            self.expect(")")
            return s
        self.error(f"unexpected token {val or 'end of input'!r}", tok)

    def exp_call(self, tok) -> Scalar:
        self.expect("(")
        start = self.peek()
        arg = self.expr()
        self.expect(")")
        rates = {}
        for (p, r), c in arg.terms.items():
            if any(r) or sum(p) != 1:
                self.error("exp argument must be linear in the coordinates", start)
            name = self.full[p.index(1)]
            if name not in self.chart:
                self.error(f"exp argument may only use chart coordinates, not {name!r}", start)
            if not c.is_rational():
                self.error("non-rational exponent rate", start)
            rates[name] = c.a
        return Scalar.exp(rates, self.full)


def parse_scalar(text: str, chart: Iterable[str] = ()) -> Scalar:
    """Parse ``text`` into a canonical Scalar over ``chart``.

    Grammar: rationals (``3``, ``1/2``, ``0.25``), ``sqrt2``, coordinate names,
    ``+ - * / ^``, ``exp(q*coord + ...)`` and parentheses.  Division is only
    allowed by constants.
    """
    chart = tuple(chart)
    if "sqrt2" in chart or "exp" in chart:
        raise ValueError("'sqrt2' and 'exp' are reserved")
    return _Parser(text, chart).parse()


def parse_linear_form(text: str, chart: Iterable[str], symbols: Iterable[str]) -> dict:
    """Parse ``sum_k f_k * s_k`` where each ``s_k`` is one of ``symbols``.

    Returns ``{symbol: Scalar}`` with Scalars over ``chart``; symbols absent
    from the text are omitted.  Each term must contain exactly one symbol to
    the first power.
    """
    chart, symbols = tuple(chart), tuple(symbols)
    clash = set(chart) & set(symbols)
    if clash:
        raise ValueError(f"names used both as coordinates and symbols: {sorted(clash)}")
    s = _Parser(text, chart, symbols).parse()
    nc = len(chart)
    parts: dict = {}
    for (p, r), c in s.terms.items():
        sym_p = p[nc:]
        if sum(sym_p) != 1:
            raise ScalarSyntaxError(f"term is not linear in {symbols}: {Scalar(s.chart, {(p, r): c})}", None, text)
        sym = symbols[sym_p.index(1)]
        key = (p[:nc], r[:nc])
        parts.setdefault(sym, {})[key] = c
    return {sym: Scalar(chart, t) for sym, t in parts.items()}
