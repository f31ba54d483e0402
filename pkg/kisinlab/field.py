"""
Finite field arithmetic
k = F_{p^f} in a polynomial basis; elements are small integer codes

An element c_0 + c_1 a + ... + c_{f-1} a^{f-1} (a the class of x modulo the
defining polynomial) has code c_0 + c_1 p + ... + c_{f-1} p^{f-1}.
Multiplication goes through exp/log tables built from a primitive element.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from .error_handler import FieldDefinitionError, ParameterMismatchError

logger = logging.getLogger(__name__)

# add tables are precomputed up to this field size
_ADD_TABLE_LIMIT = 256


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not sympy.isprime(p):
        raise FieldDefinitionError(f"p = {p!r} is not a prime")


def _is_irreducible(p: int, coeffs: Sequence[int]) -> bool:
    """coeffs low -> high"""
    x = sympy.Symbol("x")
    poly = sympy.Poly.from_list(list(reversed([c % p for c in coeffs])), x, modulus=p)
    return bool(poly.is_irreducible)


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, f: int) -> Tuple[int, ...]:
    """First monic irreducible polynomial of degree f over F_p, coefficients low -> high.

    Lower coefficients are enumerated with the constant term varying fastest,
    so F_4 gets x^2 + x + 1 and F_9 gets x^2 + 1.
    """
    _check_prime(p)
    if f < 1:
        raise FieldDefinitionError(f"extension degree f = {f} must be >= 1")
    if f == 1:
        return (0, 1)
    for lower in itertools.product(range(p), repeat=f):
        candidate = tuple(reversed(lower)) + (1,)
        if _is_irreducible(p, candidate):
            logger.debug("default modulus for F_%d^%d: %s", p, f, candidate)
            return candidate
    raise FieldDefinitionError(f"no irreducible polynomial of degree {f} over F_{p}")


@dataclass(frozen=True)
class FieldParams:
    """The coefficient field F_{p^f} together with its defining polynomial."""

    p: int
    f: int = 1
    modulus: Tuple[int, ...] = ()

    q: int = field(init=False, compare=False, repr=False)
    _digits: List[Tuple[int, ...]] = field(init=False, compare=False, repr=False)
    _exp: List[int] = field(init=False, compare=False, repr=False)
    _log: List[int] = field(init=False, compare=False, repr=False)
    _neg: List[int] = field(init=False, compare=False, repr=False)
    _frob: List[int] = field(init=False, compare=False, repr=False)
    _add: Optional[List[int]] = field(init=False, compare=False, repr=False)
    generator_is_primitive: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if not isinstance(self.f, int) or self.f < 1:
            raise FieldDefinitionError(f"extension degree f = {self.f!r} must be >= 1")
        modulus = tuple(int(c) % self.p for c in self.modulus) if self.modulus else default_modulus(self.p, self.f)
        if len(modulus) != self.f + 1 or modulus[-1] != 1:
            raise FieldDefinitionError(
                f"modulus {modulus} is not monic of degree {self.f}", witness=modulus)
        if not _is_irreducible(self.p, modulus):
            raise FieldDefinitionError(f"modulus {modulus} is reducible over F_{self.p}", witness=modulus)
        object.__setattr__(self, "modulus", modulus)
        self._build_tables()

    # table construction

    def _build_tables(self) -> None:
        p, f = self.p, self.f
        q = p ** f
        object.__setattr__(self, "q", q)
        digits = [tuple((c // p ** j) % p for j in range(f)) for c in range(q)]
        object.__setattr__(self, "_digits", digits)

        if p == 2:
            add_table: Optional[List[int]] = None
        elif q <= _ADD_TABLE_LIMIT:
            add_table = [self._slow_add(a, b) for a in range(q) for b in range(q)]
        else:
            add_table = None
        object.__setattr__(self, "_add", add_table)
        object.__setattr__(self, "_neg", [self._from_digits([(-c) % p for c in digits[a]]) for a in range(q)])

        # try the generator a first so elements print as powers of a
        order = q - 1
        candidates = ([p] if f > 1 else []) + list(range(1, q))
        primitive = None
        for g in candidates:
            if self._slow_order(g) == order:
                primitive = g
                break
        assert primitive is not None
        object.__setattr__(self, "generator_is_primitive", f > 1 and primitive == p)

        exp = [1] * order
        log = [-1] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, primitive)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_frob", [0] + [exp[(log[a] * p) % order] for a in range(1, q)])

    def _from_digits(self, coords: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** j for j, c in enumerate(coords))

    def _slow_add(self, a: int, b: int) -> int:
        return self._from_digits([x + y for x, y in zip(self._digits[a], self._digits[b])])

    def _slow_mul(self, a: int, b: int) -> int:
        p, f = self.p, self.f
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce modulo the monic modulus
        for k in range(len(prod) - 1, f - 1, -1):
            c = prod[k]
            if c:
                for j in range(f + 1):
                    prod[k - f + j] = (prod[k - f + j] - c * self.modulus[j]) % p
        return self._from_digits(prod[:f])

    def _slow_order(self, g: int) -> int:
        if g == 0:
            return 0
        x, n = g, 1
        while x != 1:
            x = self._slow_mul(x, g)
            n += 1
        return n

    # arithmetic on codes

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a * self.q + b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frob(self, a: int, times: int = 1) -> int:
        """sigma^times(a) = a^(p^times)"""
        for _ in range(times % self.f if self.f > 1 else 0):
            a = self._frob[a]
        return a

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime field"""
        return n % self.p

    def digits(self, a: int) -> Tuple[int, ...]:
        return self._digits[a]

    def from_digits(self, coords: Sequence[int]) -> int:
        if len(coords) != self.f:
            raise ParameterMismatchError(f"expected {self.f} coordinates, got {len(coords)}")
        return self._from_digits(coords)

    def generator(self) -> int:
        """Code of a, the class of x"""
        return self.p if self.f > 1 else (-self.modulus[0]) % self.p

    def discrete_log(self, a: int) -> int:
        """Exponent k with a = g^k for the table's primitive element g"""
        if a == 0:
            raise ZeroDivisionError("log of 0")
        return self._log[a]

    def basis_code(self, j: int) -> int:
        """Code of a^j for 0 <= j < f (the F_p-basis vectors)"""
        return self.p ** j

    def linear_map_matrix(self, c: int, frob_power: int = 0) -> List[List[int]]:
        """F_p-matrix (rows = output coordinate) of x -> c * sigma^frob_power(x)"""
        columns = [self.digits(self.mul(c, self.frob(self.basis_code(j), frob_power))) for j in range(self.f)]
        return [[columns[j][i] for j in range(self.f)] for i in range(self.f)]

    def subfield_degree(self, d: int) -> int:
        """Degree over F_p of k ∩ F_{p^d}"""
        return math.gcd(self.f, d)

    def in_subfield(self, a: int, d: int) -> bool:
        """a lies in F_{p^d}, i.e. a^(p^d) = a"""
        return self.frob(a, d) == a

    def codes(self) -> range:
        return range(self.q)

    def elements(self) -> Iterator["FieldElement"]:
        for c in range(self.q):
            yield FieldElement(self, c)

    def element(self, value: Union[int, "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            self.check_same(value.params)
            return value
        return FieldElement(self, self.from_int(value))

    def check_same(self, other: "FieldParams") -> None:
        if other is not self and other != self:
            raise ParameterMismatchError(f"field mismatch: {self.describe()} vs {other.describe()}")

    # text form

    def format(self, a: int) -> str:
        """Coefficient literal: integers for the prime field, powers of a otherwise"""
        if self.f == 1:
            return str(a)
        coords = self._digits[a]
        if all(c == 0 for c in coords[1:]):
            return str(coords[0])
        if self.generator_is_primitive:
            k = self._log[a]
            return "a" if k == 1 else f"a^{k}"
        terms = []
        for j, c in enumerate(coords):
            if c == 0:
                continue
            mono = "" if j == 0 else ("a" if j == 1 else f"a^{j}")
            if j == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "(" + " + ".join(terms) + ")"

    def describe(self) -> str:
        if self.f == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.f}[{self.modulus}]"


@functools.lru_cache(maxsize=None)
def field_params(p: int, f: int = 1, modulus: Optional[Tuple[int, ...]] = None) -> FieldParams:
    """Shared FieldParams instance (tables are built once per field)"""
    return FieldParams(p, f, tuple(modulus) if modulus else ())


@dataclass(frozen=True)
class FieldElement:
    """An element of k = F_{p^f}"""

    params: FieldParams
    value: int

    def _coerce(self, other: Union[int, "FieldElement"]) -> int:
        if isinstance(other, FieldElement):
            self.params.check_same(other.params)
            return other.value
        if isinstance(other, int):
            return self.params.from_int(other)
        raise TypeError(f"cannot combine a field element with {type(other).__name__}")

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.params.digits(self.value)

    def __add__(self, other: Union[int, "FieldElement"]) -> "FieldElement":
        return FieldElement(self.params, self.params.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.params, self.params.neg(self.value))

    def __sub__(self, other: Union[int, "FieldElement"]) -> "FieldElement":
        return FieldElement(self.params, self.params.sub(self.value, self._coerce(other)))

    def __rsub__(self, other: Union[int, "FieldElement"]) -> "FieldElement":
        return FieldElement(self.params, self.params.sub(self._coerce(other), self.value))

    def __mul__(self, other: Union[int, "FieldElement"]) -> "FieldElement":
        return FieldElement(self.params, self.params.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.params, self.params.inv(self.value))

    def __truediv__(self, other: Union[int, "FieldElement"]) -> "FieldElement":
        return FieldElement(self.params, self.params.div(self.value, self._coerce(other)))

    def __pow__(self, n: int) -> "FieldElement":
        return FieldElement(self.params, self.params.power(self.value, n))

    def frobenius(self, times: int = 1) -> "FieldElement":
        return FieldElement(self.params, self.params.frob(self.value, times))

    def in_subfield(self, d: int) -> bool:
        return self.params.in_subfield(self.value, d)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.params.format(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.params.describe()}, {self.params.format(self.value)})"
