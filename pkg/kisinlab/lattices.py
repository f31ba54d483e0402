"""
Lattices of an etale phi-module and the poset F^r

A Lattice is a full-rank k[[u]]-submodule of M[1/u] stored by its
canonical basis in the coordinates of the ambient module M. F^r is the
set of phi-stable lattices of height r; it has a greatest element (Max)
and, for finite r, a smallest one (Min).

The census enumerates every phi-stable lattice between two given ones as
joins of phi-closures of single vectors, then keeps those of height r.
"""

import csv
import functools
import io
import itertools
import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .config_manager import get_settings
from .error_handler import (
    CensusTooLargeError,
    DimensionMismatchError,
    NotAMorphismError,
    NotMaximalError,
    NotMinimalError,
    ParameterMismatchError,
    UnboundedHeightError,
)
from .field import FieldElement
from .matrix import (
    SeriesMatrix,
    Vector,
    hnf_lattice,
    lattice_floor,
    reduce_modulo,
    smith_divisors,
    smith_reduce,
    triangular_inverse,
)
from .phi_module import (
    PhiModule,
    PhiMorphism,
    cokernel,
    cokernel_mod_torsion,
    dual,
    image,
    kernel,
)
from .series import USeries
from .simple import max_closed_form, min_closed_form, simple_from_module
from .utils import progress_iter

logger = logging.getLogger(__name__)

METHODS = ("auto", "census", "closed_form", "duality")


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice in M[1/u], basis in canonical upper triangular form"""

    ambient: PhiModule
    basis: SeriesMatrix

    def __post_init__(self) -> None:
        if (self.basis.rows, self.basis.cols) != (self.ambient.d, self.ambient.d):
            raise DimensionMismatchError(
                f"lattice basis is {self.basis.rows}x{self.basis.cols} in a rank {self.ambient.d} module")

    @classmethod
    def from_generators(cls, ambient: PhiModule, gens: SeriesMatrix, bound: Optional[int] = None) -> "Lattice":
        return cls(ambient, hnf_lattice(gens, bound))

    @classmethod
    def standard(cls, ambient: PhiModule) -> "Lattice":
        return cls(ambient, SeriesMatrix.identity(ambient.field, ambient.d))

    @classmethod
    def scaled(cls, ambient: PhiModule, k: int) -> "Lattice":
        """u^k M"""
        return cls.diagonal(ambient, [k] * ambient.d)

    @classmethod
    def diagonal(cls, ambient: PhiModule, exponents: Sequence[int]) -> "Lattice":
        """Basis u^(a_i) e_i"""
        return cls(ambient, SeriesMatrix.monomial_diagonal(ambient.field, exponents))

    @functools.cached_property
    def floor(self) -> int:
        """Least c with u^c M inside the lattice"""
        return lattice_floor(self.basis) if self.ambient.d else 0

    @functools.cached_property
    def inverse(self) -> SeriesMatrix:
        return triangular_inverse(self.basis)

    @property
    def index(self) -> int:
        """Valuation of det(basis): length of M/L minus length of L/M"""
        return sum(self.basis[i, i].lowest for i in range(self.ambient.d))

    def contains_vector(self, v: Sequence[USeries]) -> bool:
        return all(x.is_zero() for x in reduce_modulo(self.basis, v, self.floor))

    def contains(self, other: "Lattice") -> bool:
        return all(self.contains_vector(col) for col in other.basis.columns())

    def phi_matrix(self) -> SeriesMatrix:
        return phi_matrix_in(self)

    def in_fr(self) -> bool:
        return lattice_in_fr(self)

    def as_module(self) -> PhiModule:
        """The lattice as an object in its own basis"""
        return PhiModule(self.ambient.field, self.ambient.e, self.ambient.r, self.phi_matrix())

    def coordinates(self, other: "Lattice") -> SeriesMatrix:
        """Matrix of the inclusion other -> self (other inside self)"""
        return self.inverse @ other.basis

    def describe(self) -> str:
        return "<" + ", ".join(_vector_text(col) for col in self.basis.columns()) + ">"

    def __str__(self) -> str:
        return self.describe()


def _vector_text(v: Vector) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def lattice_key(l: Lattice) -> Tuple[int, str]:
    """Deterministic sort key: larger lattices first, then by basis text"""
    return (l.index, l.describe())


# basic operations

def phi_matrix_in(l: Lattice) -> SeriesMatrix:
    """B^-1 * A * phi(B)"""
    return l.inverse @ l.ambient.frob @ l.basis.phi()


def lattice_in_fr(l: Lattice) -> bool:
    """phi-stable and of height r"""
    m = l.ambient
    if m.d == 0:
        return True
    P = phi_matrix_in(l)
    if not P.is_integral():
        return False
    if m.height is None:
        return True
    return max(smith_divisors(P), default=0) <= m.height


def lattice_contains(a: Lattice, b: Lattice) -> bool:
    """b is inside a"""
    return a.contains(b)


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    if a.ambient != b.ambient:
        raise ParameterMismatchError("lattices in different ambient modules")
    return Lattice.from_generators(a.ambient, a.basis.hstack(b.basis), bound=min(a.floor, b.floor))


def _dual_basis(basis: SeriesMatrix) -> SeriesMatrix:
    """Canonical basis of the dual lattice, (B^T)^-1"""
    w = basis.min_order() or 0
    return hnf_lattice(triangular_inverse(basis).transpose(), bound=-w)


def lattice_intersection(a: Lattice, b: Lattice) -> Lattice:
    """Dual of the sum of the duals"""
    if a.ambient != b.ambient:
        raise ParameterMismatchError("lattices in different ambient modules")
    da, db = _dual_basis(a.basis), _dual_basis(b.basis)
    wa, wb = -(a.basis.min_order() or 0), -(b.basis.min_order() or 0)
    joined = hnf_lattice(da.hstack(db), bound=min(wa, wb))
    return Lattice(a.ambient, _dual_basis(joined))


@functools.lru_cache(maxsize=256)
def _dual_ambient(m: PhiModule) -> PhiModule:
    return dual(m)


def lattice_dual(l: Lattice) -> Lattice:
    """Dual lattice inside the dual module"""
    return Lattice(_dual_ambient(l.ambient), _dual_basis(l.basis))


def elementary_divisors(l: Lattice) -> Tuple[int, ...]:
    """Exponents a_i with L = sum u^(a_i) k[[u]] f_i for some basis f_i of M"""
    if l.ambient.d == 0:
        return ()
    return smith_divisors(l.basis)


def lattice_sup_list(lattices: Sequence[Lattice]) -> Lattice:
    return functools.reduce(lattice_sum, lattices)


def lattice_inf_list(lattices: Sequence[Lattice]) -> Lattice:
    return functools.reduce(lattice_intersection, lattices)


# census

def rigid(p: int, e: int, r: Optional[int]) -> bool:
    """er < p-1: F^r has at most one element"""
    return r is not None and e * r < p - 1


def census_bits(m: PhiModule) -> float:
    """log2 of the number of vectors in u^-t M / u^t M"""
    return 2 * m.d * m.t_bound * math.log2(m.field.q)


def check_census_guard(m: PhiModule) -> None:
    bits = census_bits(m)
    guard = get_settings().census_guard_bits
    if bits > guard:
        raise CensusTooLargeError(
            f"instance too large for exhaustive census: {bits:.1f} bits > {guard}",
            witness={"d": m.d, "t": m.t_bound, "q": m.field.q},
        )


def _max_window(m: PhiModule) -> int:
    """Max is inside u^-t M with t = floor((delta+1)/(p-1)), delta the largest Smith divisor"""
    return (m.max_divisor + 1) // (m.p - 1)


@dataclass
class Census:
    """phi-stable lattices between ``base`` and ``top`` and those of height r"""
    ambient: PhiModule
    base: Lattice
    top: Lattice
    stable: List[Lattice] = field(default_factory=list)
    members: List[Lattice] = field(default_factory=list)
    closure_count: int = 0


def _quotient_basis(base: Lattice, top: Lattice) -> List[Vector]:
    """k-basis of top/base: u^k f_i (k < a_i) where base = sum u^(a_i) f_i"""
    rel = top.inverse @ base.basis
    red = smith_reduce(rel)
    if red.rank < rel.rows:
        raise DimensionMismatchError("base lattice is not of full rank in top")
    lift = top.basis @ red.P_inv
    n = base.floor
    out: List[Vector] = []
    for i, a in enumerate(red.diag):
        col = lift.column(i)
        for k in range(a):
            out.append(tuple(x.shift(k).representative(n) for x in col))
    return out


def _candidate_vectors(basis: List[Vector], q: int) -> Iterator[Tuple[int, ...]]:
    """Coefficient tuples with first nonzero entry 1 (one per k-line)"""
    n = len(basis)
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def _combine(base: Lattice, basis: List[Vector], coeffs: Tuple[int, ...]) -> Vector:
    F = base.ambient.field
    acc = [USeries.zero(F)] * base.ambient.d
    for c, vec in zip(coeffs, basis):
        if c:
            acc = [x + y.scale(FieldElement(F, c)) for x, y in zip(acc, vec)]
    return tuple(acc)


def _one_step_extensions(x: Lattice, top: Lattice) -> Iterator[Lattice]:
    """x + k[[u]] v for one v per k-line of (u^-1 x meet top) / x"""
    m = x.ambient
    layer = lattice_intersection(Lattice(m, x.basis.shift(-1)), top)
    basis = _quotient_basis(x, layer)
    for coeffs in _candidate_vectors(basis, m.field.q):
        v = _combine(x, basis, coeffs)
        gens = x.basis.hstack(SeriesMatrix.from_columns(m.field, [v], rows=m.d))
        yield Lattice.from_generators(m, gens, bound=x.floor)


def phi_closure(start: Lattice, top: Lattice) -> Optional[Lattice]:
    """Smallest phi-stable lattice containing ``start``; None once it leaves ``top``"""
    m = start.ambient
    current = start
    while True:
        if not top.contains(current):
            return None
        images = m.frob @ current.basis.phi()
        if all(current.contains_vector(col) for col in images.columns()):
            return current
        current = Lattice.from_generators(m, current.basis.hstack(images), bound=current.floor)


def census(m: PhiModule, base: Lattice, top: Lattice) -> Census:
    """Every phi-stable lattice L with base <= L <= top (base must be phi-stable).

    Walks upwards from ``base``. If L is stable and strictly contains a
    stable x, then L contains some v with u v in x and v not in x, hence the
    phi-closure of x + k[[u]] v. Those closures are the children of x, so
    every stable L is reached.
    """
    settings = get_settings()
    result = Census(m, base, top)
    closures: Dict[Lattice, Optional[Lattice]] = {}
    seen = {base}
    layer = [base]

    def close(start: Lattice) -> Optional[Lattice]:
        return phi_closure(start, top)

    with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
        while layer:
            starts = list(dict.fromkeys(
                s for x in layer for s in _one_step_extensions(x, top) if s not in closures))
            todo = progress_iter(starts, "phi-closures", total=len(starts), enabled=settings.show_progress)
            for start, closed in zip(starts, executor.map(close, todo)):
                closures[start] = closed
            fresh = {c for c in closures.values() if c is not None and c not in seen}
            seen.update(fresh)
            layer = sorted(fresh, key=lattice_key)
            logger.debug("census layer: %d closures, %d new stable lattices", len(starts), len(layer))

    result.closure_count = len({c for c in closures.values() if c is not None})
    result.stable = sorted(seen, key=lattice_key)
    result.members = [l for l in result.stable if lattice_in_fr(l)]
    logger.debug("census: %d closures, %d phi-stable lattices, %d in F^r",
                 len(closures), len(result.stable), len(result.members))
    return result


def max_census(m: PhiModule) -> Census:
    """phi-stable lattices between M and u^-t M"""
    t = _max_window(m)
    return census(m, Lattice.standard(m), Lattice.scaled(m, -t))


def min_census(m: PhiModule) -> Census:
    """phi-stable lattices between u^t M and M (t from the dual module)"""
    if m.r is None:
        raise UnboundedHeightError("Min needs a finite height bound r")
    t = (m.height - min(m.divisors, default=0) + 1) // (m.p - 1)
    return census(m, Lattice.scaled(m, t), Lattice.standard(m))


# Max and Min

@dataclass
class MaxMinResult:
    """Max^r(M) or Min^r(M): the object in its own basis, the canonical map and the lattice"""
    module: PhiModule
    inclusion: PhiMorphism
    lattice: Lattice
    method: str

    @property
    def is_identity(self) -> bool:
        return self.lattice == Lattice.standard(self.lattice.ambient)


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def _closed_form_lattice(m: PhiModule, maximal: bool) -> Optional[Lattice]:
    seq = simple_from_module(m)
    if seq is None or not seq.in_s:
        return None
    form = max_closed_form(seq) if maximal else min_closed_form(seq)
    return Lattice.diagonal(m, [-q for q in form.q])


def max_lattice(m: PhiModule, method: str = "auto") -> Tuple[Lattice, str]:
    _check_method(method)
    if m.d == 0 or (method == "auto" and rigid(m.p, m.e, m.r)):
        return Lattice.standard(m), "rigid"
    if method in ("auto", "closed_form"):
        lat = _closed_form_lattice(m, maximal=True)
        if lat is not None:
            return lat, "closed_form"
        if method == "closed_form":
            raise NotMaximalError("no closed form: the module is not a simple object M(n) with n in S")
    if method == "duality":
        if m.r is None:
            raise UnboundedHeightError("duality needs a finite height bound r")
        lat, _ = min_lattice(_dual_ambient(m), method="census")
        return Lattice(m, _dual_basis(lat.basis)), "duality"
    check_census_guard(m)
    found = max_census(m)
    top = lattice_sup_list(found.members)
    if top not in found.members:
        raise NotMaximalError("supremum of F^r is not one of its elements", witness=top.describe())
    logger.info("Max^r found by census over %d lattices", len(found.members))
    return top, "census"


def min_lattice(m: PhiModule, method: str = "auto") -> Tuple[Lattice, str]:
    _check_method(method)
    if m.r is None:
        raise UnboundedHeightError("Min needs a finite height bound r")
    if m.d == 0 or (method == "auto" and rigid(m.p, m.e, m.r)):
        return Lattice.standard(m), "rigid"
    if method in ("auto", "closed_form"):
        lat = _closed_form_lattice(m, maximal=False)
        if lat is not None:
            return lat, "closed_form"
        if method == "closed_form":
            raise NotMinimalError("no closed form: the module is not a simple object M(n) with n in S")
    if method == "census":
        check_census_guard(m)
        found = min_census(m)
        bottom = lattice_inf_list(found.members)
        if bottom not in found.members:
            raise NotMinimalError("infimum of F^r is not one of its elements", witness=bottom.describe())
        logger.info("Min^r found by census over %d lattices", len(found.members))
        return bottom, "census"
    lat, _ = max_lattice(_dual_ambient(m), method="census")
    return Lattice(m, _dual_basis(lat.basis)), "duality"


def max_r(m: PhiModule, method: str = "auto") -> MaxMinResult:
    """Greatest element of F^r, with the inclusion M -> Max^r(M)"""
    lat, how = max_lattice(m, method)
    module = lat.as_module()
    return MaxMinResult(module, PhiMorphism(m, module, lat.inverse), lat, how)


def min_r(m: PhiModule, method: str = "auto") -> MaxMinResult:
    """Smallest element of F^r, with the inclusion Min^r(M) -> M"""
    lat, how = min_lattice(m, method)
    module = lat.as_module()
    return MaxMinResult(module, PhiMorphism(module, m, lat.basis), lat, how)


def is_maximal(m: PhiModule, method: str = "auto") -> bool:
    return max_r(m, method).is_identity


def is_minimal(m: PhiModule, method: str = "auto") -> bool:
    return min_r(m, method).is_identity


# the poset

@dataclass
class FrPoset:
    """F^r with its Hasse diagram (covers[i] = indices of the elements covering i)"""
    ambient: PhiModule
    elements: List[Lattice]
    covers: Dict[int, List[int]]
    max_index: int
    min_index: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, l: Lattice) -> int:
        return self.elements.index(l)

    @property
    def standard_index(self) -> int:
        return self.index_of(Lattice.standard(self.ambient))

    def leq(self, i: int, j: int) -> bool:
        """elements[i] is inside elements[j]"""
        return self.elements[j].contains(self.elements[i])


def _hasse(elements: List[Lattice]) -> Dict[int, List[int]]:
    n = len(elements)
    below = {i: {j for j in range(n) if j != i and elements[j].contains(elements[i])} for i in range(n)}
    covers: Dict[int, List[int]] = {}
    for i in range(n):
        ups = below[i]
        covers[i] = sorted(j for j in ups if not any(j in below[k] for k in ups if k != j))
    return covers


def enumerate_fr(m: PhiModule) -> FrPoset:
    """Every element of F^r, found between Min and Max"""
    if m.r is None:
        raise UnboundedHeightError("the census of F^r needs a finite height bound r")
    check_census_guard(m)
    top, _ = max_lattice(m, method="census")
    bottom, _ = min_lattice(m, method="duality")
    found = census(m, bottom, top)
    elements = found.members
    poset = FrPoset(m, elements, _hasse(elements), elements.index(top), elements.index(bottom))
    logger.info("F^r has %d elements", poset.size)
    return poset


def longest_chain(poset: FrPoset) -> int:
    """Number of elements of a longest chain"""
    best: Dict[int, int] = {}

    def height(i: int) -> int:
        if i not in best:
            best[i] = 1 + max((height(j) for j in poset.covers[i]), default=0)
        return best[i]

    return max((height(i) for i in range(poset.size)), default=0)


def chain_bound(m: PhiModule) -> int:
    """1 + d * floor((er+1)/(p-1))"""
    return 1 + m.d * m.t_bound


def _node_label(poset: FrPoset, i: int) -> str:
    label = str(list(elementary_divisors(poset.elements[i])))
    tags = [tag for tag, idx in (("Max", poset.max_index), ("Min", poset.min_index)) if idx == i]
    return label + (" " + " ".join(tags) if tags else "")


def poset_dot(poset: FrPoset) -> str:
    """Hasse diagram in DOT, smaller lattices at the bottom"""
    lines = ["digraph Fr {", "  rankdir=BT;", "  node [shape=box];"]
    for i in range(poset.size):
        attrs = [f'label="{_node_label(poset, i)}"']
        if i in (poset.max_index, poset.min_index):
            attrs.append("style=bold")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for i, ups in sorted(poset.covers.items()):
        for j in ups:
            lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_csv(poset: FrPoset) -> str:
    """One row per element: divisors, basis, membership flags and covers"""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["index", "elementary_divisors", "basis", "in_fr", "is_max", "is_min", "is_standard", "covered_by"])
    std = Lattice.standard(poset.ambient)
    for i, l in enumerate(poset.elements):
        writer.writerow([
            i,
            " ".join(str(a) for a in elementary_divisors(l)),
            l.describe(),
            lattice_in_fr(l),
            i == poset.max_index,
            i == poset.min_index,
            l == std,
            " ".join(str(j) for j in poset.covers[i]),
        ])
    return out.getvalue()


# maps between lattices

@dataclass(frozen=True)
class LatticeMap:
    """A map of etale modules (ambient coordinates) restricted to lattices"""
    source: Lattice
    target: Lattice
    mat: SeriesMatrix

    def morphism(self) -> PhiMorphism:
        """The induced morphism in the lattices' own bases"""
        m = self.target.inverse @ self.mat @ self.source.basis
        if not m.is_integral():
            raise NotAMorphismError("the map does not send the source lattice into the target lattice")
        return PhiMorphism(self.source.as_module(), self.target.as_module(), m)


def _common_matrix(fs: Sequence[LatticeMap]) -> SeriesMatrix:
    if not fs:
        raise ValueError("need at least one map")
    mat = fs[0].mat
    for f in fs[1:]:
        if f.source.ambient != fs[0].source.ambient or f.target.ambient != fs[0].target.ambient:
            raise ParameterMismatchError("maps between different ambient modules")
        if not f.mat.agrees_with(mat):
            raise NotAMorphismError("maps are not restrictions of one map of etale modules")
    return mat


def sup_map(fs: Sequence[LatticeMap]) -> LatticeMap:
    """The induced map sum of sources -> sum of targets"""
    mat = _common_matrix(fs)
    out = LatticeMap(lattice_sup_list([f.source for f in fs]), lattice_sup_list([f.target for f in fs]), mat)
    out.morphism()
    return out


def inf_map(fs: Sequence[LatticeMap]) -> LatticeMap:
    """The induced map intersection of sources -> intersection of targets"""
    mat = _common_matrix(fs)
    out = LatticeMap(lattice_inf_list([f.source for f in fs]), lattice_inf_list([f.target for f in fs]), mat)
    out.morphism()
    return out


def max_map(f: PhiMorphism, method: str = "auto") -> PhiMorphism:
    """Max^r(f): Max^r(a) -> Max^r(b)"""
    la, _ = max_lattice(f.source, method)
    lb, _ = max_lattice(f.target, method)
    return LatticeMap(la, lb, f.mat).morphism()


def min_map(f: PhiMorphism, method: str = "auto") -> PhiMorphism:
    """Min^r(f): Min^r(a) -> Min^r(b)"""
    la, _ = min_lattice(f.source, method)
    lb, _ = min_lattice(f.target, method)
    return LatticeMap(la, lb, f.mat).morphism()


def extend_to_max(f: PhiMorphism, method: str = "auto") -> PhiMorphism:
    """Unique extension Max^r(a) -> b of f: a -> b for maximal b"""
    if not is_maximal(f.target, method):
        raise NotMaximalError("target is not maximal")
    la, _ = max_lattice(f.source, method)
    return LatticeMap(la, Lattice.standard(f.target), f.mat).morphism()


def restrict_to_min(f: PhiMorphism, method: str = "auto") -> PhiMorphism:
    """Unique factorisation a -> Min^r(b) of f: a -> b for minimal a"""
    if not is_minimal(f.source, method):
        raise NotMinimalError("source is not minimal")
    lb, _ = min_lattice(f.target, method)
    return LatticeMap(Lattice.standard(f.source), lb, f.mat).morphism()


# abelian structure of the maximal and minimal subcategories

def _require_maximal(f: PhiMorphism, method: str) -> None:
    for role, m in (("source", f.source), ("target", f.target)):
        if not is_maximal(m, method):
            raise NotMaximalError(f"{role} is not maximal")


def _require_minimal(f: PhiMorphism, method: str) -> None:
    for role, m in (("source", f.source), ("target", f.target)):
        if not is_minimal(m, method):
            raise NotMinimalError(f"{role} is not minimal")


def kernel_max(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """Plain kernel, which is already maximal"""
    _require_maximal(f, method)
    sub, _ = kernel(f)
    if sub.d and not is_maximal(sub, method):
        raise NotMaximalError("kernel of a map of maximal objects is not maximal")
    return sub


def cokernel_max(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """Max^r(coker f / u-torsion)"""
    _require_maximal(f, method)
    quot = cokernel_mod_torsion(f)
    return max_r(quot, method).module if quot.d else quot


def image_max(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """Max^r(im f)"""
    _require_maximal(f, method)
    sub, _ = image(f)
    return max_r(sub, method).module if sub.d else sub


def coimage_max(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """Max^r(source / ker f)"""
    _require_maximal(f, method)
    _, incl = kernel(f)
    quot = cokernel(incl).module
    return max_r(quot, method).module if quot.d else quot


def kernel_min(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """Min^r(ker f)"""
    _require_minimal(f, method)
    sub, _ = kernel(f)
    return min_r(sub, method).module if sub.d else sub


def cokernel_min(f: PhiMorphism, method: str = "auto") -> PhiModule:
    """coker f / u-torsion, already minimal"""
    _require_minimal(f, method)
    return cokernel_mod_torsion(f)
