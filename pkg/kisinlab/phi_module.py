"""
Frobenius modules over k[[u]]

PhiModule is a free k[[u]]-module of rank d with a semilinear Frobenius
given by its matrix A on the standard basis (column j = phi(e_j)). It is
an object of height r when A is integral, det A != 0 and every Smith
divisor of A is at most e*r.
"""

import functools
import itertools
import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .config_manager import get_settings
from .error_handler import (
    DimensionMismatchError,
    HeightViolationError,
    NotAMorphismError,
    ParameterMismatchError,
    PrecisionNotStabilizedError,
    SingularMatrixError,
    UnboundedHeightError,
)
from .field import FieldParams
from .matrix import (
    SeriesMatrix,
    determinant,
    inverse_laurent,
    smith_divisors,
    smith_reduce,
    working_precision,
)
from .models import CheckResult, IsoStatus, ValidationReport
from .series import USeries, pmin

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhiModule:
    """Free k[[u]]-module with Frobenius matrix ``frob`` and height bound r (None = unbounded)"""

    field: FieldParams
    e: int
    r: Optional[int]
    frob: SeriesMatrix

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ParameterMismatchError(f"ramification index must be >= 1, got {self.e}")
        if self.r is not None and self.r < 0:
            raise ParameterMismatchError(f"height bound must be >= 0, got {self.r}")
        if not self.frob.is_square:
            raise DimensionMismatchError("Frobenius matrix must be square")
        if self.frob.field != self.field:
            raise ParameterMismatchError("Frobenius matrix over another field")

    # constructors

    @classmethod
    def from_rows(cls, field: FieldParams, e: int, r: Optional[int], rows: Sequence[Sequence]) -> "PhiModule":
        return cls(field, e, r, SeriesMatrix.from_rows(field, rows, cols=len(rows)))

    @classmethod
    def unit(cls, field: FieldParams, e: int = 1, r: Optional[int] = 1, d: int = 1) -> "PhiModule":
        """phi(e_i) = e_i"""
        return cls(field, e, r, SeriesMatrix.identity(field, d))

    @classmethod
    def scalar(cls, field: FieldParams, e: int, r: Optional[int], n: int) -> "PhiModule":
        """Rank one, phi(1) = u^n"""
        return cls(field, e, r, SeriesMatrix.monomial_diagonal(field, [n]))

    @classmethod
    def zero(cls, field: FieldParams, e: int = 1, r: Optional[int] = 1) -> "PhiModule":
        return cls(field, e, r, SeriesMatrix.zeros(field, 0, 0))

    # properties

    @property
    def d(self) -> int:
        return self.frob.rows

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def height(self) -> Optional[int]:
        """e*r, or None when r is unbounded"""
        return None if self.r is None else self.e * self.r

    @property
    def t_bound(self) -> int:
        """floor((er+1)/(p-1)): u^t M' is inside M for every M' in F^r containing M"""
        h = self.height if self.height is not None else self.max_divisor
        return (h + 1) // (self.p - 1)

    @functools.cached_property
    def divisors(self) -> Tuple[int, ...]:
        """Smith divisor exponents of the Frobenius matrix"""
        if self.d == 0:
            return ()
        return smith_divisors(self.frob)

    @property
    def max_divisor(self) -> int:
        return max(self.divisors, default=0)

    @property
    def work_precision(self) -> int:
        """N_work = e*r*(d+1) + p*(t+maxdeg) + 8, unless overridden in the settings"""
        h = self.height if self.height is not None else self.max_divisor
        estimate = h * (self.d + 1) + self.p * (self.t_bound + self.frob.max_degree()) + 8
        return working_precision(estimate)

    def with_height(self, r: Optional[int]) -> "PhiModule":
        return PhiModule(self.field, self.e, r, self.frob)

    def with_frob(self, frob: SeriesMatrix) -> "PhiModule":
        return PhiModule(self.field, self.e, self.r, frob)

    def same_category(self, other: "PhiModule") -> bool:
        return self.field == other.field and self.e == other.e

    def check_same_category(self, other: "PhiModule") -> None:
        if not self.same_category(other):
            raise ParameterMismatchError(
                f"modules over ({self.field.describe()}, e={self.e}) and ({other.field.describe()}, e={other.e})")

    def describe(self) -> str:
        r = "inf" if self.r is None else str(self.r)
        return f"rank {self.d} phi-module over {self.field.describe()}[[u]], e={self.e}, r={r}"

    def __str__(self) -> str:
        return f"{self.describe()}: {self.frob}"


def validate(m: PhiModule) -> ValidationReport:
    """Run every object check; failures become report entries, not exceptions"""
    report = ValidationReport(summary=m.describe())
    A = m.frob

    inexact = [(i, j) for i in range(m.d) for j in range(m.d) if not A[i, j].is_exact]
    report.checks.append(CheckResult(
        "exact_entries", not inexact,
        "entries are exact polynomials" if not inexact else "entries carry an O(u^N) term",
        inexact or None,
    ))

    negative = [(i, j, A[i, j].order()) for i in range(m.d) for j in range(m.d) if not A[i, j].is_integral()]
    report.checks.append(CheckResult(
        "integral", not negative,
        "standard lattice is phi-stable" if not negative else "Frobenius matrix has negative powers of u",
        negative or None,
    ))

    det = determinant(A) if m.d else USeries.one(m.field)
    det_ok = not det.is_zero()
    report.checks.append(CheckResult(
        "determinant", det_ok,
        f"det has valuation {det.order()}" if det_ok else "id (x) phi is not injective (det = 0)",
        det.order() if det_ok else None,
    ))

    if not (det_ok and not negative):
        report.checks.append(CheckResult("height", False, "skipped: matrix is not integral of full rank"))
        return report

    divisors = m.divisors
    if m.height is None:
        report.checks.append(CheckResult("height", True, "r unbounded", list(divisors)))
    else:
        bad = [a for a in divisors if a > m.height]
        report.checks.append(CheckResult(
            "height", not bad,
            f"Smith divisors {list(divisors)} within [0, {m.height}]" if not bad
            else f"Smith divisor {max(bad)} exceeds e*r = {m.height}",
            max(bad) if bad else list(divisors),
        ))
    return report


def is_valid(m: PhiModule) -> bool:
    return validate(m).passed


def require_valid(m: PhiModule) -> PhiModule:
    report = validate(m)
    if not report.passed:
        failed = report.failures()[0]
        raise HeightViolationError(f"{failed.name}: {failed.message}", witness=failed.witness)
    return m


def apply_phi(m: PhiModule, v: Sequence[USeries]) -> Tuple[USeries, ...]:
    """phi(v) = A * phi_series(v) for v in M[1/u] coordinates"""
    if len(v) != m.d:
        raise DimensionMismatchError(f"vector of length {len(v)} in a rank {m.d} module")
    return m.frob.apply([x.phi() for x in v])


@dataclass(frozen=True)
class PhiMorphism:
    """k[[u]]-linear map commuting with phi; ``mat`` is target.d x source.d"""

    source: PhiModule
    target: PhiModule
    mat: SeriesMatrix

    @classmethod
    def create(cls, source: PhiModule, target: PhiModule, mat: SeriesMatrix) -> "PhiMorphism":
        """Checked constructor"""
        f = cls(source, target, mat)
        f.check()
        return f

    @classmethod
    def identity(cls, m: PhiModule) -> "PhiMorphism":
        return cls(m, m, SeriesMatrix.identity(m.field, m.d))

    @classmethod
    def zero(cls, source: PhiModule, target: PhiModule) -> "PhiMorphism":
        return cls(source, target, SeriesMatrix.zeros(source.field, target.d, source.d))

    def defect(self) -> SeriesMatrix:
        """F * A_source - A_target * phi(F)"""
        return self.mat @ self.source.frob - self.target.frob @ self.mat.phi()

    def is_valid(self) -> bool:
        try:
            self.check()
        except (NotAMorphismError, ParameterMismatchError):
            return False
        return True

    def check(self) -> None:
        self.source.check_same_category(self.target)
        if (self.mat.rows, self.mat.cols) != (self.target.d, self.source.d):
            raise DimensionMismatchError(
                f"morphism matrix is {self.mat.rows}x{self.mat.cols}, expected {self.target.d}x{self.source.d}")
        if not self.mat.is_integral():
            raise NotAMorphismError("morphism matrix has negative powers of u")
        if not self.defect().is_zero():
            raise NotAMorphismError("matrix does not commute with Frobenius", witness=str(self.defect()))

    def compose(self, other: "PhiMorphism") -> "PhiMorphism":
        """self o other"""
        if other.target.d != self.source.d:
            raise DimensionMismatchError("morphisms are not composable")
        return PhiMorphism(other.source, self.target, self.mat @ other.mat)

    def __add__(self, other: "PhiMorphism") -> "PhiMorphism":
        return PhiMorphism(self.source, self.target, self.mat + other.mat)

    def scale(self, c: int) -> "PhiMorphism":
        return PhiMorphism(self.source, self.target, self.mat.scale(c))

    def is_isomorphism(self) -> bool:
        """Square with det a unit of k[[u]]"""
        if self.source.d != self.target.d:
            return False
        if self.source.d == 0:
            return True
        return determinant(self.mat).is_unit()

    def __str__(self) -> str:
        return f"morphism rank {self.source.d} -> rank {self.target.d}: {self.mat}"


# Hom spaces

def _residual_columns(a: PhiModule, b: PhiModule, n: int) -> Tuple[List[Tuple[int, int, int, int]], List[List[int]]]:
    """F_p-matrix of F -> F*A_a - A_b*phi(F) on coefficients of degree < n.

    Unknowns are ordered by degree first, so the coefficients of low degree
    form a leading block of columns.
    """
    F = a.field
    p, f = F.p, F.f
    da, db = a.d, b.d
    size = db * da * n * f
    unknowns: List[Tuple[int, int, int, int]] = []
    columns: List[List[int]] = []
    A, B = a.frob, b.frob
    for deg, i, j, l in itertools.product(range(n), range(db), range(da), range(f)):
        c = F.basis_code(l)
        c_frob = F.frob(c)
        col = [0] * size

        def put(row: int, entry: int, degree: int, code: int, sign: int) -> None:
            base = ((row * da + entry) * n + degree) * f
            for k, digit in enumerate(F.digits(code)):
                if digit:
                    col[base + k] = (col[base + k] + sign * digit) % p

        for cc in range(da):
            for dg, code in A[j, cc].terms():
                if dg + deg < n:
                    put(i, cc, dg + deg, F.mul(c, code), 1)
        for rr in range(db):
            for dg, code in B[rr, i].terms():
                if dg + p * deg < n:
                    put(rr, j, dg + p * deg, F.mul(code, c_frob), -1)
        unknowns.append((deg, i, j, l))
        columns.append(col)
    return unknowns, columns


def _solution_rows(a: PhiModule, b: PhiModule, n: int) -> List[List[int]]:
    """RREF basis (rows) of the solution space modulo u^n"""
    p = a.field.p
    K = GF(p)
    unknowns, columns = _residual_columns(a, b, n)
    if not unknowns:
        return []
    nrows, ncols = len(columns[0]), len(columns)
    system = DomainMatrix(
        [[K(columns[c][r]) for c in range(ncols)] for r in range(nrows)], (nrows, ncols), K)
    kernel = system.nullspace()
    rows = [[int(x) % p for x in row] for row in kernel.to_list()]
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    reduced, _ = DomainMatrix([[K(x) for x in r] for r in rows], (len(rows), ncols), K).rref()
    return [[int(x) % p for x in row] for row in reduced.to_list() if any(int(x) % p for x in row)]


def _leading_block_rank(rows: List[List[int]], width: int) -> int:
    """Rows of an RREF matrix whose pivot lies in the first ``width`` columns"""
    count = 0
    for row in rows:
        pivot = next(i for i, x in enumerate(row) if x)
        if pivot < width:
            count += 1
    return count


def hom_precision(a: PhiModule, b: PhiModule) -> Tuple[int, int]:
    """(K, N): a morphism is determined by its coefficients below u^K; equations are solved mod u^N"""
    p = a.p
    delta = a.max_divisor
    K = delta // (p - 1) + 1
    estimate = p * K + delta + max(a.frob.max_degree(), b.frob.max_degree()) + 8
    return K, working_precision(estimate)


def hom_space(a: PhiModule, b: PhiModule) -> List[PhiMorphism]:
    """F_p-basis of Hom(a, b).

    The linear system is solved modulo u^N and modulo u^2N; the two
    solution spaces must have the same image on coefficients of degree < K,
    otherwise PrecisionNotStabilizedError is raised.
    """
    a.check_same_category(b)
    if a.d == 0 or b.d == 0:
        return []
    F = a.field
    f = F.f
    K, N = hom_precision(a, b)
    block = K * a.d * b.d * f

    low = _solution_rows(a, b, N)
    high = _solution_rows(a, b, 2 * N)
    dim_low = _leading_block_rank(low, block)
    dim_high = _leading_block_rank(high, block)
    if dim_low != dim_high:
        raise PrecisionNotStabilizedError(
            f"Hom dimension {dim_low} at precision {N} but {dim_high} at {2 * N}",
            witness=[dim_low, dim_high],
        )

    result_prec = 2 * N - a.max_divisor
    unknowns = [(deg, i, j, l) for deg in range(2 * N) for i in range(b.d) for j in range(a.d) for l in range(f)]
    basis: List[PhiMorphism] = []
    for row in high[:dim_high]:
        terms: dict = {}
        for (deg, i, j, l), x in zip(unknowns, row):
            if x and deg < result_prec:
                code = F.mul(F.from_int(x), F.basis_code(l))
                key = (i, j)
                terms.setdefault(key, {})
                terms[key][deg] = F.add(terms[key].get(deg, 0), code)
        grid = [[USeries.from_codes(F, terms.get((i, j), {}), prec=result_prec) for j in range(a.d)]
                for i in range(b.d)]
        basis.append(PhiMorphism(a, b, SeriesMatrix.from_rows(F, grid, cols=a.d)))
    logger.info("Hom space of dimension %d over F_%d (solved mod u^%d)", len(basis), F.p, 2 * N)
    return basis


def hom_dimension(a: PhiModule, b: PhiModule) -> int:
    return len(hom_space(a, b))


@dataclass
class IsoResult:
    """Outcome of find_isomorphism"""
    status: IsoStatus
    morphism: Optional[PhiMorphism] = None
    hom_dimension: int = 0
    searched: int = 0

    @property
    def isomorphic(self) -> bool:
        return self.status is IsoStatus.ISOMORPHIC


def _constant_terms(f: PhiMorphism) -> List[List[int]]:
    return f.mat.truncate(1).constant_term() if f.mat.rows else []


def _constant_det_nonzero(field: FieldParams, m: List[List[int]]) -> bool:
    """Gaussian elimination over k on the constant term matrix"""
    rows = [list(r) for r in m]
    n = len(rows)
    for k in range(n):
        pivot = next((i for i in range(k, n) if rows[i][k]), None)
        if pivot is None:
            return False
        rows[k], rows[pivot] = rows[pivot], rows[k]
        inv = field.inv(rows[k][k])
        for i in range(k + 1, n):
            if rows[i][k]:
                c = field.mul(rows[i][k], inv)
                rows[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[k])]
    return True


def find_isomorphism(a: PhiModule, b: PhiModule) -> IsoResult:
    """Search the F_p-span of Hom(a, b) for an element whose constant term is invertible"""
    a.check_same_category(b)
    if a.d != b.d:
        return IsoResult(IsoStatus.NOT_ISOMORPHIC)
    if a.d == 0:
        return IsoResult(IsoStatus.ISOMORPHIC, PhiMorphism.identity(a))
    basis = hom_space(a, b)
    h = len(basis)
    if h == 0:
        return IsoResult(IsoStatus.NOT_ISOMORPHIC)
    limit = get_settings().hom_exhaust_limit
    F = a.field
    constants = [_constant_terms(g) for g in basis]

    # basis elements first: the common case of a one-dimensional space is settled here
    for g, c in zip(basis, constants):
        if _constant_det_nonzero(F, c):
            return IsoResult(IsoStatus.ISOMORPHIC, g, h, 1)
    if h > limit:
        logger.warning("Hom space of dimension %d exceeds the exhaustion limit %d", h, limit)
        return IsoResult(IsoStatus.UNDECIDED, None, h, h)

    searched = 0
    for coeffs in itertools.product(range(a.p), repeat=h):
        if sum(1 for x in coeffs if x) < 2:
            continue
        searched += 1
        combo = [[0] * a.d for _ in range(a.d)]
        for x, c in zip(coeffs, constants):
            if x:
                combo = [[F.add(u, F.mul(F.from_int(x), v)) for u, v in zip(r1, r2)]
                         for r1, r2 in zip(combo, c)]
        if _constant_det_nonzero(F, combo):
            mor = None
            for x, g in zip(coeffs, basis):
                if x:
                    term = g.scale(x)
                    mor = term if mor is None else mor + term
            return IsoResult(IsoStatus.ISOMORPHIC, mor, h, searched)
    return IsoResult(IsoStatus.NOT_ISOMORPHIC, None, h, searched)


def is_isomorphic(a: PhiModule, b: PhiModule) -> bool:
    return find_isomorphism(a, b).isomorphic


# kernels, images, cokernels

def _exactify(mat: SeriesMatrix, n: int) -> SeriesMatrix:
    """Exact polynomial matrix congruent to ``mat`` modulo u^min(n, prec)"""
    prec = pmin(mat.precision, n)
    if prec is None:
        return mat
    return mat.map(lambda x: x.representative(prec))


def kernel(f: PhiMorphism) -> Tuple[PhiModule, PhiMorphism]:
    """Saturated kernel with its induced Frobenius and inclusion into the source"""
    a = f.source
    F = a.field
    red = smith_reduce(f.mat)
    k = red.rank
    rest = list(range(k, a.d))
    if not rest:
        zero = PhiModule.zero(F, a.e, a.r)
        return zero, PhiMorphism(zero, a, SeriesMatrix.zeros(F, a.d, 0))
    n = a.work_precision
    basis = _exactify(red.Q.submatrix(range(a.d), rest), n)
    coords = red.Q_inv.submatrix(rest, range(a.d))
    frob = _exactify(coords @ a.frob @ basis.phi(), n)
    sub = PhiModule(F, a.e, a.r, frob)
    return sub, PhiMorphism(sub, a, basis)


def image(f: PhiMorphism) -> Tuple[PhiModule, PhiMorphism]:
    """Image as a submodule of the target, with its inclusion"""
    b = f.target
    F = b.field
    red = smith_reduce(f.mat)
    k = red.rank
    if k == 0:
        zero = PhiModule.zero(F, b.e, b.r)
        return zero, PhiMorphism(zero, b, SeriesMatrix.zeros(F, b.d, 0))
    n = b.work_precision
    scale = SeriesMatrix.monomial_diagonal(F, red.diag)
    basis = _exactify(red.P_inv.submatrix(range(b.d), range(k)) @ scale, n)
    coords = SeriesMatrix.monomial_diagonal(F, [-x for x in red.diag]) @ red.P.submatrix(range(k), range(b.d))
    frob = _exactify(coords @ b.frob @ basis.phi(), n)
    sub = PhiModule(F, b.e, b.r, frob)
    return sub, PhiMorphism(sub, b, basis)


@dataclass(frozen=True)
class Cokernel:
    """Torsion-free cokernel, the projection onto it and the u-torsion lengths dropped"""
    module: PhiModule
    projection: PhiMorphism
    torsion: Tuple[int, ...] = ()


def cokernel(f: PhiMorphism) -> Cokernel:
    b = f.target
    F = b.field
    red = smith_reduce(f.mat)
    k = red.rank
    rest = list(range(k, b.d))
    torsion = tuple(x for x in red.diag if x > 0)
    n = b.work_precision
    if not rest:
        zero = PhiModule.zero(F, b.e, b.r)
        return Cokernel(zero, PhiMorphism(b, zero, SeriesMatrix.zeros(F, 0, b.d)), torsion)
    proj = _exactify(red.P.submatrix(rest, range(b.d)), n)
    lift = red.P_inv.submatrix(range(b.d), rest)
    frob = _exactify(proj @ b.frob @ lift.phi(), n)
    quot = PhiModule(F, b.e, b.r, frob)
    return Cokernel(quot, PhiMorphism(b, quot, proj), torsion)


def cokernel_mod_torsion(f: PhiMorphism) -> PhiModule:
    """coker(f) / u-torsion"""
    return cokernel(f).module


def cokernel_torsion(f: PhiMorphism) -> Tuple[int, ...]:
    """Lengths u^a of the cyclic torsion summands of coker(f)"""
    return cokernel(f).torsion


# duality and constructions

def dual(m: PhiModule) -> PhiModule:
    """Frobenius u^(er) * (A^T)^-1 on the dual basis"""
    if m.r is None:
        raise UnboundedHeightError("duality needs a finite height bound r")
    if m.d == 0:
        return m
    n = m.work_precision
    try:
        inv_t = inverse_laurent(m.frob.transpose(), prec=n + m.height)
    except SingularMatrixError as e:
        raise HeightViolationError(f"dual of a singular module: {e.message}") from e
    frob = _exactify(inv_t.shift(m.height), n)
    if not frob.is_integral():
        raise HeightViolationError(
            f"dual is not integral: the module is not of height {m.r}", witness=list(m.divisors))
    return PhiModule(m.field, m.e, m.r, frob)


def dual_morphism(f: PhiMorphism) -> PhiMorphism:
    """f: a -> b gives f^T: b^v -> a^v"""
    return PhiMorphism(dual(f.target), dual(f.source), f.mat.transpose())


def direct_sum(a: PhiModule, b: PhiModule) -> PhiModule:
    a.check_same_category(b)
    if a.r != b.r:
        raise ParameterMismatchError(f"height bounds differ: {a.r} vs {b.r}")
    F = a.field
    frob = SeriesMatrix.block(a.frob, SeriesMatrix.zeros(F, a.d, b.d),
                              SeriesMatrix.zeros(F, b.d, a.d), b.frob)
    return PhiModule(F, a.e, a.r, frob)


def extension_build(sub: PhiModule, quot: PhiModule, cocycle: SeriesMatrix) -> PhiModule:
    """Frobenius [[A_sub, cocycle], [0, A_quot]], height re-validated"""
    sub.check_same_category(quot)
    if sub.r != quot.r:
        raise ParameterMismatchError(f"height bounds differ: {sub.r} vs {quot.r}")
    if (cocycle.rows, cocycle.cols) != (sub.d, quot.d):
        raise DimensionMismatchError(f"cocycle must be {sub.d}x{quot.d}")
    if not cocycle.is_integral():
        raise NotAMorphismError("cocycle has negative powers of u")
    F = sub.field
    frob = SeriesMatrix.block(sub.frob, cocycle, SeriesMatrix.zeros(F, quot.d, sub.d), quot.frob)
    total = PhiModule(F, sub.e, sub.r, frob)
    report = validate(total)
    if not report.passed:
        failed = report.failures()[0]
        raise HeightViolationError(f"extension is not an object of height {sub.r}: {failed.message}",
                                   witness=failed.witness)
    return total


def extension_inclusion(sub: PhiModule, total: PhiModule) -> PhiMorphism:
    """sub -> total onto the first coordinates"""
    F = sub.field
    mat = SeriesMatrix.identity(F, sub.d).vstack(SeriesMatrix.zeros(F, total.d - sub.d, sub.d))
    return PhiMorphism(sub, total, mat)


# random objects

def _rng(rng: Optional[random.Random]) -> random.Random:
    return rng if rng is not None else random.Random(get_settings().random_seed)


def random_polynomial(field: FieldParams, rng: random.Random, max_degree: int) -> USeries:
    return USeries(field, 0, tuple(rng.randrange(field.q) for _ in range(max_degree + 1)))


def _random_unimodular(field: FieldParams, d: int, rng: random.Random, max_degree: int) -> SeriesMatrix:
    """Lower unitriangular * upper unitriangular * invertible constant diagonal"""
    zero, one = USeries.zero(field), USeries.one(field)
    lower = [[random_polynomial(field, rng, max_degree) if j < i else (one if i == j else zero)
              for j in range(d)] for i in range(d)]
    upper = [[random_polynomial(field, rng, max_degree) if j > i else (one if i == j else zero)
              for j in range(d)] for i in range(d)]
    diag = [USeries(field, 0, (rng.randrange(1, field.q),)) for _ in range(d)]
    return (SeriesMatrix.from_rows(field, lower, cols=d) @ SeriesMatrix.from_rows(field, upper, cols=d)
            @ SeriesMatrix.diagonal(field, diag))


def random_phi_module(field: FieldParams, e: int, r: int, d: int, rng: Optional[random.Random] = None,
                      max_degree: int = 1, exponents: Optional[Sequence[int]] = None) -> PhiModule:
    """U * diag(u^(a_i)) * V with U, V unimodular polynomial matrices and 0 <= a_i <= e*r"""
    rng = _rng(rng)
    if exponents is None:
        exponents = [rng.randint(0, e * r) for _ in range(d)]
    U = _random_unimodular(field, d, rng, max_degree)
    V = _random_unimodular(field, d, rng, max_degree)
    frob = U @ SeriesMatrix.monomial_diagonal(field, exponents) @ V
    return PhiModule(field, e, r, frob)


def random_extension(sub: PhiModule, quot: PhiModule, rng: Optional[random.Random] = None,
                     max_degree: int = 2, attempts: int = 20) -> Optional[PhiModule]:
    """Random block-triangular extension that passes the height check, or None"""
    rng = _rng(rng)
    F = sub.field
    for _ in range(attempts):
        cocycle = SeriesMatrix.from_rows(
            F, [[random_polynomial(F, rng, max_degree) for _ in range(quot.d)] for _ in range(sub.d)],
            cols=quot.d)
        try:
            return extension_build(sub, quot, cocycle)
        except HeightViolationError:
            continue
    return None
