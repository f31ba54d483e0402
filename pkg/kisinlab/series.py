"""
Truncated Laurent series in u over k

A USeries is known modulo u^prec (prec None means the value is exact).
Precision is propagated with the usual non-archimedean rules, and a series
that vanishes to its known precision is never mistaken for an exact zero.
"""

import functools
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .error_handler import ParameterMismatchError, ParseError, PrecisionError
from .field import FieldElement, FieldParams

logger = logging.getLogger(__name__)

Prec = Optional[int]
Scalar = Union[int, FieldElement]


def pmin(*values: Prec) -> Prec:
    """Minimum of precisions, None standing for +infinity"""
    known = [v for v in values if v is not None]
    return min(known) if known else None


def padd(a: Prec, k: int) -> Prec:
    return None if a is None else a + k


@functools.total_ordering
@dataclass(frozen=True)
class InfiniteValuation:
    """Valuation of a series that vanishes to its known precision"""

    prec: Prec = None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, InfiniteValuation)

    def __lt__(self, other: object) -> bool:
        return False

    def __hash__(self) -> int:
        return hash("inf")

    def __str__(self) -> str:
        return "+inf" if self.prec is None else f"+inf (mod u^{self.prec})"


@dataclass(frozen=True)
class USeries:
    """Series sum_i coeffs[i] * u^(lowest + i) + O(u^prec) with coefficients as field codes."""

    field: FieldParams
    lowest: int
    coeffs: Tuple[int, ...]
    prec: Prec = None

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs)
        lowest = self.lowest
        if self.prec is not None:
            del coeffs[max(0, self.prec - lowest):]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        end = len(coeffs)
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        if start == end:
            object.__setattr__(self, "lowest", 0)
            object.__setattr__(self, "coeffs", ())
        else:
            object.__setattr__(self, "lowest", lowest + start)
            object.__setattr__(self, "coeffs", tuple(coeffs[start:end]))

    # constructors

    @classmethod
    def zero(cls, field: FieldParams, prec: Prec = None) -> "USeries":
        return cls(field, 0, (), prec)

    @classmethod
    def one(cls, field: FieldParams) -> "USeries":
        return cls(field, 0, (1,))

    @classmethod
    def constant(cls, field: FieldParams, value: Scalar, prec: Prec = None) -> "USeries":
        return cls(field, 0, (_code(field, value),), prec)

    @classmethod
    def monomial(cls, field: FieldParams, exponent: int, value: Scalar = 1) -> "USeries":
        return cls(field, exponent, (_code(field, value),))

    @classmethod
    def from_list(cls, field: FieldParams, coeffs: Sequence[Scalar], lowest: int = 0,
                  prec: Prec = None) -> "USeries":
        return cls(field, lowest, tuple(_code(field, c) for c in coeffs), prec)

    @classmethod
    def from_codes(cls, field: FieldParams, codes: Dict[int, int], prec: Prec = None) -> "USeries":
        """Terms given as {exponent: field code}"""
        if not codes:
            return cls.zero(field, prec)
        lo, hi = min(codes), max(codes)
        coeffs = [0] * (hi - lo + 1)
        for n, c in codes.items():
            coeffs[n - lo] = c
        return cls(field, lo, tuple(coeffs), prec)

    @classmethod
    def from_dict(cls, field: FieldParams, terms: Dict[int, Scalar], prec: Prec = None) -> "USeries":
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        coeffs = [0] * (hi - lo + 1)
        for n, c in terms.items():
            coeffs[n - lo] = field.add(coeffs[n - lo], _code(field, c))
        return cls(field, lo, tuple(coeffs), prec)

    # queries

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Zero to the known precision (or exactly zero)"""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec is None

    def valuation(self) -> Union[int, InfiniteValuation]:
        if not self.coeffs:
            return InfiniteValuation(self.prec)
        return self.lowest

    def order(self) -> Optional[int]:
        """Valuation as an int, None when zero to precision"""
        return self.lowest if self.coeffs else None

    def order_bound(self) -> Optional[int]:
        """Lower bound for the true valuation (prec for a zero-to-precision value)"""
        return self.lowest if self.coeffs else self.prec

    def degree(self) -> Optional[int]:
        return self.lowest + len(self.coeffs) - 1 if self.coeffs else None

    def coefficient(self, n: int) -> int:
        if self.prec is not None and n >= self.prec:
            raise PrecisionError(f"coefficient of u^{n} unknown (series known mod u^{self.prec})")
        i = n - self.lowest
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def leading_coefficient(self) -> int:
        if not self.coeffs:
            raise PrecisionError("leading coefficient of a series that is zero to precision")
        return self.coeffs[0]

    def terms(self) -> Iterator[Tuple[int, int]]:
        """(exponent, code) pairs of the nonzero known terms"""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lowest + i, c

    def is_unit(self) -> bool:
        return bool(self.coeffs) and self.lowest == 0

    def is_integral(self) -> bool:
        """No known term of negative degree"""
        return not self.coeffs or self.lowest >= 0

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def agrees_with(self, other: "USeries") -> bool:
        """Equal modulo the smaller of the two precisions"""
        return (self - other).is_zero()

    # arithmetic

    def _check(self, other: "USeries") -> None:
        if not isinstance(other, USeries):
            raise TypeError(f"expected USeries, got {type(other).__name__}")
        if other.field is not self.field and other.field != self.field:
            raise ParameterMismatchError(
                f"series over {self.field.describe()} and {other.field.describe()}")

    def __add__(self, other: "USeries") -> "USeries":
        self._check(other)
        F = self.field
        prec = pmin(self.prec, other.prec)
        if not other.coeffs:
            return USeries(F, self.lowest, self.coeffs, prec)
        if not self.coeffs:
            return USeries(F, other.lowest, other.coeffs, prec)
        lo = min(self.lowest, other.lowest)
        hi = max(self.lowest + len(self.coeffs), other.lowest + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return USeries.zero(F, prec)
        res = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            k = self.lowest + i - lo
            if k < len(res):
                res[k] = c
        for i, c in enumerate(other.coeffs):
            k = other.lowest + i - lo
            if k < len(res) and c:
                res[k] = F.add(res[k], c)
        return USeries(F, lo, tuple(res), prec)

    def __neg__(self) -> "USeries":
        F = self.field
        return USeries(F, self.lowest, tuple(F.neg(c) for c in self.coeffs), self.prec)

    def __sub__(self, other: "USeries") -> "USeries":
        return self + (-other)

    def scale(self, value: Scalar) -> "USeries":
        """Multiply by a constant of k"""
        F = self.field
        c = _code(F, value)
        if c == 0:
            return USeries.zero(F)
        return USeries(F, self.lowest, tuple(F.mul(c, x) for x in self.coeffs), self.prec)

    def shift(self, k: int) -> "USeries":
        """Multiply by u^k"""
        return USeries(self.field, self.lowest + k, self.coeffs, padd(self.prec, k))

    def __mul__(self, other: Union["USeries", int, FieldElement]) -> "USeries":
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        self._check(other)
        F = self.field
        a, b = self, other
        if a.is_exact_zero() or b.is_exact_zero():
            return USeries.zero(F)
        va, vb = a.order_bound(), b.order_bound()
        prec = pmin(
            None if a.prec is None else a.prec + vb,  # type: ignore[operator]
            None if b.prec is None else b.prec + va,  # type: ignore[operator]
        )
        if not a.coeffs or not b.coeffs:
            return USeries.zero(F, prec)
        lo = a.lowest + b.lowest
        n = len(a.coeffs) + len(b.coeffs) - 1
        if prec is not None:
            n = min(n, prec - lo)
        if n <= 0:
            return USeries.zero(F, prec)
        res = [0] * n
        add, mul = F.add, F.mul
        bc = b.coeffs
        for i, x in enumerate(a.coeffs):
            if x == 0 or i >= n:
                continue
            for j in range(min(len(bc), n - i)):
                y = bc[j]
                if y:
                    res[i + j] = add(res[i + j], mul(x, y))
        return USeries(F, lo, tuple(res), prec)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "USeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = USeries.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self, prec: Prec = None) -> "USeries":
        """u^(-v) times the inverse of the unit part.

        An exact monomial inverts exactly. Otherwise the result is known
        modulo u^prec at most (prec is required for exact non-monomials).
        """
        F = self.field
        if not self.coeffs:
            if self.prec is None:
                raise ZeroDivisionError("inverse of the exact zero series")
            raise PrecisionError(f"inverse of a series that is zero mod u^{self.prec}")
        v = self.lowest
        w = self.coeffs
        b0 = F.inv(w[0])
        if len(w) == 1 and self.prec is None:
            return USeries(F, -v, (b0,))
        rel: Prec = None if self.prec is None else self.prec - v
        if prec is not None:
            rel = pmin(rel, prec + v)
        if rel is None:
            raise PrecisionError("inverting an exact non-monomial series needs a target precision")
        out = [0] * max(rel, 0)
        if rel > 0:
            out[0] = b0
        nb = F.neg(b0)
        for n in range(1, rel):
            s = 0
            for k in range(1, min(n, len(w) - 1) + 1):
                if w[k] and out[n - k]:
                    s = F.add(s, F.mul(w[k], out[n - k]))
            out[n] = F.mul(nb, s)
        return USeries(F, -v, tuple(out), -v + rel)

    def divide(self, other: "USeries", prec: Prec = None) -> "USeries":
        return self * other.inverse(prec)

    def phi(self) -> "USeries":
        """sigma on coefficients and u -> u^p"""
        F = self.field
        p = F.p
        if not self.coeffs:
            return USeries.zero(F, None if self.prec is None else p * self.prec)
        res = [0] * ((len(self.coeffs) - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                res[i * p] = F.frob(c)
        return USeries(F, self.lowest * p, tuple(res), None if self.prec is None else p * self.prec)

    def truncate(self, n: int) -> "USeries":
        """Forget everything from u^n on"""
        return USeries(self.field, self.lowest, self.coeffs, pmin(self.prec, n))

    def representative(self, n: int) -> "USeries":
        """Exact Laurent polynomial congruent to self modulo u^n"""
        if self.prec is not None and self.prec < n:
            raise PrecisionError(f"series known mod u^{self.prec}, needed mod u^{n}")
        keep = max(0, n - self.lowest)
        return USeries(self.field, self.lowest, self.coeffs[:keep])

    def quotient_by_power(self, k: int) -> "USeries":
        """Integral part of self * u^(-k): the terms of degree >= k shifted down"""
        drop = max(0, k - self.lowest)
        return USeries(self.field, self.lowest + drop - k, self.coeffs[drop:], padd(self.prec, -k))

    def remainder_by_power(self, k: int) -> "USeries":
        """Terms of degree < k, exact"""
        if self.prec is not None and self.prec < k:
            raise PrecisionError(f"series known mod u^{self.prec}, needed below u^{k}")
        return USeries(self.field, self.lowest, self.coeffs[:max(0, k - self.lowest)])

    def as_exact(self) -> "USeries":
        return USeries(self.field, self.lowest, self.coeffs)

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"USeries({format_series(self)})"


def _code(field: FieldParams, value: Scalar) -> int:
    if isinstance(value, FieldElement):
        field.check_same(value.params)
        return value.value
    return field.from_int(int(value))


def series_add(a: USeries, b: USeries) -> USeries:
    return a + b


def series_mul(a: USeries, b: USeries) -> USeries:
    return a * b


def series_inv(a: USeries, prec: Prec = None) -> USeries:
    return a.inverse(prec)


def phi_series(a: USeries) -> USeries:
    return a.phi()


def valuation(a: USeries) -> Union[int, InfiniteValuation]:
    return a.valuation()


# text form

def _monomial_text(n: int) -> str:
    if n == 1:
        return "u"
    return f"u^{n}"


def format_series(s: USeries) -> str:
    """Literal in ascending degree, e.g. ``1 + 2*u^3 + O(u^5)``"""
    F = s.field
    parts: List[str] = []
    for n, c in s.terms():
        if n == 0:
            parts.append(F.format(c))
        elif c == 1:
            parts.append(_monomial_text(n))
        else:
            parts.append(f"{F.format(c)}*{_monomial_text(n)}")
    if s.prec is not None:
        parts.append(f"O(u^{s.prec})")
    return " + ".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|([uaO])|([-+*^()]))")


class _Parser:
    """Recursive descent over the literal grammar"""

    def __init__(self, text: str, field: FieldParams):
        self.text = text
        self.field = field
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[str]:
        tokens: List[str] = []
        i = 0
        stripped = text.rstrip()
        while i < len(stripped):
            m = _TOKEN.match(stripped, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {stripped[i]!r} in {text!r}", witness=i)
            tokens.append(m.group(m.lastindex or 0))
            i = m.end()
        return tokens

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'} in {self.text!r}, got {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> USeries:
        if not self.tokens:
            raise ParseError("empty series literal")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r} in {self.text!r}")
        return value

    def expr(self) -> USeries:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> USeries:
        value = self.factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                value = value * self.factor()
            elif tok is not None and (tok.isdigit() or tok in ("u", "a", "O", "(")):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> USeries:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            k = self.signed_int()
            if k < 0 and not (base.is_monomial() and base.is_exact):
                raise ParseError(f"negative power of a non-monomial in {self.text!r}")
            base = base ** k
        return base

    def signed_int(self) -> int:
        if self.peek() == "(":
            self.take()
            k = self.signed_int()
            self.take(")")
            return k
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected an integer exponent in {self.text!r}, got {tok!r}")
        return sign * int(tok)

    def atom(self) -> USeries:
        F = self.field
        tok = self.take()
        if tok.isdigit():
            return USeries.constant(F, int(tok))
        if tok == "u":
            return USeries.monomial(F, 1)
        if tok == "a":
            if F.f == 1:
                raise ParseError("the generator 'a' needs f > 1")
            return USeries.constant(F, _generator(F))
        if tok == "O":
            self.take("(")
            if self.peek() == "u":
                self.take()
                n = 1
                if self.peek() == "^":
                    self.take()
                    n = self.signed_int()
            else:
                digit = self.take()
                if digit != "1":
                    raise ParseError(f"bad precision term in {self.text!r}")
                n = 0
            self.take(")")
            return USeries.zero(F, n)
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def _generator(F: FieldParams) -> FieldElement:
    return FieldElement(F, F.generator())


def parse_series(text: str, field: FieldParams) -> USeries:
    """Parse a series literal such as ``a*u + a^2*u^4`` or ``1 + u^-1 + O(u^6)``"""
    return _Parser(str(text), field).parse()


def parse_coefficient(text: str, field: FieldParams) -> int:
    """Parse a constant of k (an expression in a), returning its code"""
    value = parse_series(text, field)
    if value.prec is not None or (value.coeffs and (value.lowest != 0 or len(value.coeffs) != 1)):
        raise ParseError(f"{text!r} is not a constant of {field.describe()}")
    return value.coeffs[0] if value.coeffs else 0
