"""
Linear algebra over k[[u]] and k((u))

Matrices of USeries, determinants, Smith forms, Laurent inverses and the
canonical (Hermite) basis of a lattice. Canonical lattice bases are upper
triangular with monomial diagonal, so they invert exactly.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .config_manager import get_settings
from .error_handler import (
    DimensionMismatchError,
    ParameterMismatchError,
    PrecisionError,
    RankDeficientError,
    SingularMatrixError,
)
from .field import FieldElement, FieldParams
from .series import Prec, USeries, pmin

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 64

Vector = Tuple[USeries, ...]
Entry = Union[USeries, int, FieldElement]


def working_precision(fallback: Optional[int] = None) -> int:
    """Configured precision override, else the caller's estimate, else the default"""
    override = get_settings().working_precision
    if override is not None:
        return override
    return fallback if fallback is not None else DEFAULT_PRECISION


def _as_series(field: FieldParams, x: Entry) -> USeries:
    if isinstance(x, USeries):
        if x.field != field:
            raise ParameterMismatchError("matrix entries over different fields")
        return x
    return USeries.constant(field, x)


@dataclass(frozen=True)
class SeriesMatrix:
    """Rectangular matrix of USeries over one field"""

    field: FieldParams
    rows: int
    cols: int
    entries: Tuple[Tuple[USeries, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatchError(f"entries do not form a {self.rows}x{self.cols} grid")

    # constructors

    @classmethod
    def from_rows(cls, field: FieldParams, rows: Sequence[Sequence[Entry]],
                  cols: Optional[int] = None) -> "SeriesMatrix":
        grid = tuple(tuple(_as_series(field, x) for x in row) for row in rows)
        ncols = cols if cols is not None else (len(grid[0]) if grid else 0)
        return cls(field, len(grid), ncols, grid)

    @classmethod
    def from_columns(cls, field: FieldParams, columns: Sequence[Sequence[Entry]],
                     rows: Optional[int] = None) -> "SeriesMatrix":
        nrows = rows if rows is not None else (len(columns[0]) if columns else 0)
        grid = tuple(
            tuple(_as_series(field, columns[j][i]) for j in range(len(columns)))
            for i in range(nrows)
        )
        return cls(field, nrows, len(columns), grid)

    @classmethod
    def zeros(cls, field: FieldParams, rows: int, cols: int) -> "SeriesMatrix":
        z = USeries.zero(field)
        return cls(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldParams, n: int) -> "SeriesMatrix":
        return cls.monomial_diagonal(field, [0] * n)

    @classmethod
    def diagonal(cls, field: FieldParams, diag: Sequence[USeries]) -> "SeriesMatrix":
        n = len(diag)
        z = USeries.zero(field)
        return cls(field, n, n, tuple(
            tuple(diag[i] if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def monomial_diagonal(cls, field: FieldParams, exponents: Sequence[int]) -> "SeriesMatrix":
        return cls.diagonal(field, [USeries.monomial(field, a) for a in exponents])

    # access

    def __getitem__(self, index: Tuple[int, int]) -> USeries:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def precision(self) -> Prec:
        return pmin(*(x.prec for row in self.entries for x in row))

    @property
    def is_exact(self) -> bool:
        return all(x.prec is None for row in self.entries for x in row)

    def min_order(self) -> Optional[int]:
        """Smallest valuation among entries that are nonzero to precision"""
        orders = [x.order() for row in self.entries for x in row if x.coeffs]
        return min(orders) if orders else None  # type: ignore[type-var]

    def max_degree(self) -> int:
        degs = [x.degree() for row in self.entries for x in row if x.coeffs]
        return max(degs) if degs else 0  # type: ignore[type-var]

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.entries for x in row)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def agrees_with(self, other: "SeriesMatrix") -> bool:
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return (self - other).is_zero()

    def is_upper_triangular(self) -> bool:
        return all(self.entries[i][j].is_exact_zero()
                   for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_lower_triangular(self) -> bool:
        return self.transpose().is_upper_triangular()

    def constant_term(self) -> List[List[int]]:
        """Field codes of the u^0 coefficients"""
        return [[x.coefficient(0) for x in row] for row in self.entries]

    # arithmetic

    def _same_shape(self, other: "SeriesMatrix") -> None:
        if other.field != self.field:
            raise ParameterMismatchError("matrices over different fields")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"shapes {self.rows}x{self.cols} and {other.rows}x{other.cols} differ")

    def map(self, fn: Callable[[USeries], USeries]) -> "SeriesMatrix":
        return SeriesMatrix(self.field, self.rows, self.cols,
                            tuple(tuple(fn(x) for x in row) for row in self.entries))

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._same_shape(other)
        return SeriesMatrix(self.field, self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)))

    def __neg__(self) -> "SeriesMatrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + (-other)

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return mat_mul(self, other)

    def scale(self, s: Union[USeries, int, FieldElement]) -> "SeriesMatrix":
        s = _as_series(self.field, s)
        return self.map(lambda x: s * x)

    def shift(self, k: int) -> "SeriesMatrix":
        """u^k times the matrix"""
        return self.map(lambda x: x.shift(k))

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix(self.field, self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def phi(self) -> "SeriesMatrix":
        return self.map(lambda x: x.phi())

    def truncate(self, n: int) -> "SeriesMatrix":
        return self.map(lambda x: x.truncate(n))

    def as_exact(self) -> "SeriesMatrix":
        return self.map(lambda x: x.as_exact())

    def apply(self, v: Sequence[USeries]) -> Vector:
        """Matrix times column vector"""
        if len(v) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(v)} for {self.cols} columns")
        out = []
        for row in self.entries:
            acc = USeries.zero(self.field)
            for a, b in zip(row, v):
                if not (a.is_exact_zero() or b.is_exact_zero()):
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "SeriesMatrix":
        rows, cols = list(rows), list(cols)
        return SeriesMatrix(self.field, len(rows), len(cols), tuple(
            tuple(self.entries[i][j] for j in cols) for i in rows))

    def hstack(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if other.rows != self.rows:
            raise DimensionMismatchError("hstack needs equal row counts")
        return SeriesMatrix(self.field, self.rows, self.cols + other.cols, tuple(
            a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if other.cols != self.cols:
            raise DimensionMismatchError("vstack needs equal column counts")
        return SeriesMatrix(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    @staticmethod
    def block(upper_left: "SeriesMatrix", upper_right: "SeriesMatrix",
              lower_left: "SeriesMatrix", lower_right: "SeriesMatrix") -> "SeriesMatrix":
        return upper_left.hstack(upper_right).vstack(lower_left.hstack(lower_right))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"


def mat_mul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    """Product with precision propagation"""
    if a.field != b.field:
        raise ParameterMismatchError("matrices over different fields")
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    F = a.field
    bt = b.transpose().entries
    rows = []
    for row in a.entries:
        out = []
        for col in bt:
            acc = USeries.zero(F)
            for x, y in zip(row, col):
                if not (x.is_exact_zero() or y.is_exact_zero()):
                    acc = acc + x * y
            out.append(acc)
        rows.append(tuple(out))
    return SeriesMatrix(F, a.rows, b.cols, tuple(rows))


def determinant(a: SeriesMatrix) -> USeries:
    """Sum over permutations, built row by row over subsets of used columns"""
    if not a.is_square:
        raise DimensionMismatchError(f"determinant of a {a.rows}x{a.cols} matrix")
    n = a.rows
    F = a.field
    states = {0: USeries.one(F)}
    for i in range(n):
        nxt: dict = {}
        for mask, value in states.items():
            for j in range(n):
                if mask >> j & 1:
                    continue
                entry = a.entries[i][j]
                if entry.is_exact_zero():
                    continue
                term = value * entry
                if bin(mask >> (j + 1)).count("1") % 2:
                    term = -term
                key = mask | (1 << j)
                nxt[key] = nxt[key] + term if key in nxt else term
        states = nxt
    return states.get((1 << n) - 1, USeries.zero(F))


def adjugate(a: SeriesMatrix) -> SeriesMatrix:
    """Transpose of the cofactor matrix"""
    if not a.is_square:
        raise DimensionMismatchError("adjugate of a non-square matrix")
    n = a.rows
    F = a.field
    if n == 1:
        return SeriesMatrix.identity(F, 1)
    out = [[USeries.zero(F)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = a.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j])
            cof = determinant(minor)
            out[j][i] = -cof if (i + j) % 2 else cof
    return SeriesMatrix.from_rows(F, out)


# triangular matrices with monomial diagonal

def has_monomial_diagonal(a: SeriesMatrix) -> bool:
    return all(a.entries[i][i].is_monomial() and a.entries[i][i].is_exact for i in range(min(a.rows, a.cols)))


def solve_upper_triangular(b: SeriesMatrix, v: Sequence[USeries]) -> Vector:
    """x with b x = v, b upper triangular with exact monomial diagonal"""
    n = b.rows
    x: List[USeries] = [USeries.zero(b.field)] * n
    for i in reversed(range(n)):
        acc = v[i]
        for j in range(i + 1, n):
            if not (b.entries[i][j].is_exact_zero() or x[j].is_exact_zero()):
                acc = acc - b.entries[i][j] * x[j]
        x[i] = acc * b.entries[i][i].inverse()
    return tuple(x)


def triangular_inverse(b: SeriesMatrix) -> SeriesMatrix:
    """Inverse of an upper or lower triangular matrix with exact monomial diagonal"""
    if b.is_upper_triangular():
        F = b.field
        n = b.rows
        unit = [tuple(USeries.one(F) if i == j else USeries.zero(F) for i in range(n)) for j in range(n)]
        return SeriesMatrix.from_columns(F, [solve_upper_triangular(b, e) for e in unit], rows=n)
    return triangular_inverse(b.transpose()).transpose()


# Smith form

@dataclass(frozen=True)
class SmithDecomposition:
    """original = left * diag(u^divisors) * right, left and right invertible over k[[u]]"""

    left: SeriesMatrix
    divisors: Tuple[int, ...]
    right: SeriesMatrix

    def diagonal(self) -> SeriesMatrix:
        return SeriesMatrix.monomial_diagonal(self.left.field, self.divisors)

    def reassemble(self) -> SeriesMatrix:
        return self.left @ self.diagonal() @ self.right


@dataclass
class SmithReduction:
    """P * a * Q = D (rectangular diagonal with entries u^diag[i], i < rank)"""

    diag: List[int]
    P: SeriesMatrix
    P_inv: SeriesMatrix
    Q: SeriesMatrix
    Q_inv: SeriesMatrix
    exhausted: bool

    @property
    def rank(self) -> int:
        return len(self.diag)


def _identity_grid(F: FieldParams, n: int) -> List[List[USeries]]:
    one, zero = USeries.one(F), USeries.zero(F)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def smith_reduce(a: SeriesMatrix, prec: Prec = None) -> SmithReduction:
    """Two-sided elimination with the minimal-valuation pivot (ties: lowest row, then column).

    Works for rectangular matrices of any rank; entries that vanish to
    precision are treated as zero, and ``exhausted`` records whether the
    unreduced block had only such entries.
    """
    F = a.field
    m, n = a.rows, a.cols
    W = [[x if prec is None else x.truncate(prec) for x in row] for row in a.entries]
    P, Pi = _identity_grid(F, m), _identity_grid(F, m)
    Q, Qi = _identity_grid(F, n), _identity_grid(F, n)
    diag: List[int] = []
    exhausted = False

    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                o = W[i][j].order()
                if o is not None and (best is None or o < best[0]):
                    best = (o, i, j)
        if best is None:
            exhausted = any(not W[i][j].is_exact for i in range(k, m) for j in range(k, n))
            break
        v, pi, pj = best

        W[k], W[pi] = W[pi], W[k]
        P[k], P[pi] = P[pi], P[k]
        for row in Pi:
            row[k], row[pi] = row[pi], row[k]
        for row in W:
            row[k], row[pj] = row[pj], row[k]
        for row in Q:
            row[k], row[pj] = row[pj], row[k]
        Qi[k], Qi[pj] = Qi[pj], Qi[k]

        unit = W[k][k].shift(-v)
        if not unit.is_monomial() or unit.prec is not None or unit.coeffs != (1,):
            if unit.is_monomial() and unit.prec is None:
                inv = unit.inverse()
            else:
                inv = unit.inverse(working_precision() if prec is None else prec)
            W[k] = [x * inv for x in W[k]]
            P[k] = [x * inv for x in P[k]]
            for row in Pi:
                row[k] = row[k] * unit
        W[k][k] = USeries.monomial(F, v)

        for i in range(k + 1, m):
            c = W[i][k].quotient_by_power(v)
            if c.is_zero():
                W[i][k] = USeries.zero(F, c.prec if c.prec is None else c.prec + v)
                continue
            W[i] = [x - c * y for x, y in zip(W[i], W[k])]
            P[i] = [x - c * y for x, y in zip(P[i], P[k])]
            for row in Pi:
                row[k] = row[k] + c * row[i]
        for j in range(k + 1, n):
            c = W[k][j].quotient_by_power(v)
            if c.is_zero():
                W[k][j] = USeries.zero(F, c.prec if c.prec is None else c.prec + v)
                continue
            for row in W:
                row[j] = row[j] - c * row[k]
            for row in Q:
                row[j] = row[j] - c * row[k]
            Qi[k] = [x + c * y for x, y in zip(Qi[k], Qi[j])]
        diag.append(v)

    return SmithReduction(
        diag=diag,
        P=SeriesMatrix.from_rows(F, P, cols=m),
        P_inv=SeriesMatrix.from_rows(F, Pi, cols=m),
        Q=SeriesMatrix.from_rows(F, Q, cols=n),
        Q_inv=SeriesMatrix.from_rows(F, Qi, cols=n),
        exhausted=exhausted,
    )


def smith_normal_form(a: SeriesMatrix, prec: Prec = None) -> SmithDecomposition:
    """Smith form of a square matrix with nonzero determinant"""
    if not a.is_square:
        raise DimensionMismatchError("smith_normal_form needs a square matrix")
    if prec is None:
        if a.is_exact:
            det_order = determinant(a).order()
            if det_order is None:
                raise SingularMatrixError("determinant is exactly zero")
            prec = working_precision(2 * (det_order + 1) + 8)
        else:
            prec = a.precision
    red = smith_reduce(a, prec)
    if red.rank < a.rows:
        if red.exhausted:
            raise PrecisionError("precision exhausted or singular", witness=red.diag)
        raise SingularMatrixError("determinant is exactly zero", witness=red.diag)
    return SmithDecomposition(red.P_inv, tuple(red.diag), red.Q_inv)


def smith_divisors(a: SeriesMatrix) -> Tuple[int, ...]:
    """Elementary divisor exponents of a square matrix over k[[u]] (entries may be Laurent)"""
    lo = a.min_order()
    if lo is None:
        raise SingularMatrixError("zero matrix")
    shift = min(lo, 0)
    decomposition = smith_normal_form(a.shift(-shift) if shift else a)
    return tuple(x + shift for x in decomposition.divisors)


def inverse_laurent(a: SeriesMatrix, prec: Prec = None) -> SeriesMatrix:
    """Inverse over k((u)); exact for triangular matrices with monomial diagonal
    and whenever the determinant is a monomial."""
    if not a.is_square:
        raise DimensionMismatchError("inverse of a non-square matrix")
    if a.is_exact and has_monomial_diagonal(a) and (a.is_upper_triangular() or a.is_lower_triangular()):
        return triangular_inverse(a)
    det = determinant(a)
    if det.is_zero():
        if det.is_exact:
            raise SingularMatrixError("matrix is singular")
        raise PrecisionError("determinant vanishes to precision: precision exhausted or singular")
    if det.is_monomial() and det.is_exact:
        det_inv = det.inverse()
    else:
        det_inv = det.inverse(working_precision() if prec is None else prec)
    return adjugate(a).scale(det_inv)


# lattices

def _rank_bound(gens: SeriesMatrix) -> int:
    """Exponent c with u^c M inside the span of gens (best d x d minor)"""
    d, m = gens.rows, gens.cols
    w = gens.min_order()
    if w is None:
        raise RankDeficientError("all generators vanish")
    best: Optional[int] = None
    ambiguous = False
    for subset in itertools.combinations(range(m), d):
        det = determinant(gens.submatrix(range(d), subset))
        o = det.order()
        if o is None:
            ambiguous = ambiguous or not det.is_exact
            continue
        if best is None or o < best:
            best = o
    if best is None:
        if ambiguous:
            raise PrecisionError("cannot certify full rank at this precision")
        raise RankDeficientError(f"generators span less than rank {d}")
    return best - (d - 1) * w


def hnf_lattice(gens: SeriesMatrix, bound: Optional[int] = None) -> SeriesMatrix:
    """Canonical basis of the k[[u]]-span of the columns of gens.

    The result B is upper triangular, B[i][i] = u^(a_i), and every entry
    above a pivot only has exponents below a_i. ``bound`` is an exponent c
    with u^c M contained in the span; it is derived from the minors when
    omitted.
    """
    F = gens.field
    d, m = gens.rows, gens.cols
    if m < d:
        raise RankDeficientError(f"{m} generators cannot span rank {d}")
    c = _rank_bound(gens) if bound is None else bound
    if gens.precision is not None and gens.precision < c:
        raise PrecisionError(f"generators known mod u^{gens.precision}, need mod u^{c}")

    remaining: List[List[USeries]] = [[x.representative(c) for x in col] for col in gens.columns()]
    pivots: List[List[USeries]] = [[] for _ in range(d)]
    exps = [0] * d
    zero = USeries.zero(F)

    for i in reversed(range(d)):
        best = None
        for idx, col in enumerate(remaining):
            o = col[i].order()
            if o is not None and o < c and (best is None or o < best[0]):
                best = (o, idx)
        if best is None:
            pivots[i] = [USeries.monomial(F, c) if r == i else zero for r in range(d)]
            exps[i] = c
            continue
        a, idx = best
        col = remaining.pop(idx)
        unit = col[i].shift(-a)
        if unit.coeffs != (1,):
            lo = min(x.lowest for x in col if x.coeffs)
            inv = unit.inverse() if unit.is_monomial() else unit.inverse(c - lo)
            col = [(x * inv).representative(c) if x.coeffs else zero for x in col]
        col[i] = USeries.monomial(F, a)
        for other in remaining:
            q = other[i].quotient_by_power(a)
            if q.coeffs:
                for r in range(i):
                    if col[r].coeffs:
                        other[r] = (other[r] - q * col[r]).representative(c)
            other[i] = zero
        # u^(c-a) * col vanishes in row i mod u^c but not above it
        syzygy = [col[r].shift(c - a).representative(c) if r < i and col[r].coeffs else zero
                  for r in range(d)]
        if any(x.coeffs for x in syzygy):
            remaining.append(syzygy)
        pivots[i] = col
        exps[i] = a

    basis = [list(col) for col in pivots]
    for j in range(d):
        for i in reversed(range(j)):
            q = basis[j][i].quotient_by_power(exps[i])
            if q.coeffs:
                for r in range(i + 1):
                    if basis[i][r].coeffs:
                        basis[j][r] = basis[j][r] - q * basis[i][r]
    return SeriesMatrix.from_columns(F, basis, rows=d)


def lattice_floor(basis: SeriesMatrix) -> int:
    """Least c with u^c M inside the lattice spanned by a canonical basis"""
    inv = triangular_inverse(basis)
    lo = inv.min_order()
    return -lo if lo is not None else 0


def reduce_modulo(basis: SeriesMatrix, v: Sequence[USeries], floor: Optional[int] = None) -> Vector:
    """Canonical representative of v modulo the lattice with canonical basis ``basis``.

    Row i of the result only has exponents below the i-th pivot exponent;
    v lies in the lattice iff the result is zero.
    """
    d = basis.rows
    if floor is None:
        floor = lattice_floor(basis)
    out = [x.representative(floor) for x in v]
    for i in reversed(range(d)):
        a = basis.entries[i][i].lowest
        q = out[i].quotient_by_power(a)
        if q.coeffs:
            for r in range(i + 1):
                b = basis.entries[r][i]
                if b.coeffs:
                    out[r] = out[r] - q * b
    return tuple(out)


def solve_membership(basis: SeriesMatrix, v: Sequence[USeries]) -> Optional[Vector]:
    """Coordinates x over k[[u]] with basis * x = v, or None when v lies outside.

    Raises PrecisionError when the known digits cannot decide.
    """
    if not basis.is_square:
        raise DimensionMismatchError("membership needs a square basis")
    if basis.is_exact and has_monomial_diagonal(basis) and basis.is_upper_triangular():
        x = solve_upper_triangular(basis, v)
    else:
        x = inverse_laurent(basis).apply(v)
    undecided = False
    for coord in x:
        if coord.coeffs and coord.lowest < 0:
            return None
        if coord.prec is not None and coord.prec < 0:
            undecided = True
    if undecided:
        raise PrecisionError("insufficient precision to decide membership")
    return x
