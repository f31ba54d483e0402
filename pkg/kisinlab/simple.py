"""
Simple phi-modules M(n)

A periodic sequence n of integers in [0, e*r] gives the rank-d module
with phi(e_i) = u^{n_i} e_{i+1} (indices mod d, d the smallest period).
Its invariants are the integers s_i = sum_j n_{i+j} p^{d-1-j} and the
fractions t_i = s_i / (p^d - 1) mod 1. S is the set of sequences whose
t_i are pairwise distinct; on S the maximal and minimal objects have
closed forms.
"""

import csv
import io
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .error_handler import (
    KisinError,
    NotInSError,
    ParameterMismatchError,
    UnboundedHeightError,
)
from .field import FieldParams, field_params
from .matrix import SeriesMatrix
from .phi_module import PhiModule
from .series import USeries

logger = logging.getLogger(__name__)


def smallest_period(word: Sequence[int]) -> int:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and tuple(word) == tuple(word[:d]) * (n // d):
            return d
    return n


@dataclass(frozen=True)
class SimpleSeq:
    """Periodic sequence n, stored by one (not necessarily smallest) period"""

    field: FieldParams
    e: int
    r: Optional[int]
    n: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if not self.n:
            raise ParameterMismatchError("a sequence needs at least one entry")
        if self.e < 1:
            raise ParameterMismatchError(f"ramification index must be >= 1, got {self.e}")
        low = min(self.n)
        if low < 0:
            raise ParameterMismatchError(f"negative exponent {low} in {list(self.n)}")
        if self.r is not None and max(self.n) > self.e * self.r:
            raise ParameterMismatchError(
                f"exponents must lie in [0, {self.e * self.r}], got {list(self.n)}",
                solution="raise r or lower the entries",
            )

    @classmethod
    def create(cls, n: Sequence[int], p: int, f: int = 1, e: int = 1,
               r: Optional[int] = None) -> "SimpleSeq":
        return cls(field_params(p, f), e, r, tuple(n))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def f(self) -> int:
        return self.field.f

    @property
    def height(self) -> Optional[int]:
        return None if self.r is None else self.e * self.r

    @property
    def d(self) -> int:
        return smallest_period(self.n)

    @property
    def word(self) -> Tuple[int, ...]:
        return self.n[: self.d]

    def entry(self, i: int) -> int:
        return self.word[i % self.d]

    @property
    def modulus(self) -> int:
        """p^d - 1"""
        return self.p ** self.d - 1

    @property
    def s(self) -> Tuple[int, ...]:
        d, p = self.d, self.p
        return tuple(
            sum(self.entry(i + j) * p ** (d - 1 - j) for j in range(d))
            for i in range(d)
        )

    @property
    def t(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(si, self.modulus) % 1 for si in self.s)

    @property
    def m_bound(self) -> int:
        """min(e*r, p-1)"""
        if self.height is None:
            return self.p - 1
        return min(self.height, self.p - 1)

    @property
    def in_s(self) -> bool:
        t = self.t
        return len(set(t)) == len(t)

    @property
    def in_smax(self) -> bool:
        m = self.m_bound
        word = self.word
        return all(0 <= x <= m for x in word) and word != (self.p - 1,)

    @property
    def in_smin(self) -> bool:
        if self.height is None:
            return False
        m, h = self.m_bound, self.height
        word = self.word
        return all(h - m <= x <= h for x in word) and word != (h - (self.p - 1),)

    def with_word(self, word: Sequence[int]) -> "SimpleSeq":
        return SimpleSeq(self.field, self.e, self.r, tuple(word))

    def same_category(self, other: "SimpleSeq") -> bool:
        return self.field == other.field and self.e == other.e and self.r == other.r

    def __str__(self) -> str:
        return "M(" + ",".join(str(x) for x in self.word) + ")"


@dataclass(frozen=True)
class SeqInvariants:
    d: int
    s: Tuple[int, ...]
    t: Tuple[Fraction, ...]
    in_s: bool
    in_smax: bool
    in_smin: bool


def seq_invariants(seq: SimpleSeq) -> SeqInvariants:
    return SeqInvariants(seq.d, seq.s, seq.t, seq.in_s, seq.in_smax, seq.in_smin)


def build_module(seq: SimpleSeq) -> PhiModule:
    """phi(e_i) = u^{n_i} e_{i+1}"""
    d = seq.d
    zero = USeries.zero(seq.field)
    rows: List[List[USeries]] = [[zero] * d for _ in range(d)]
    for i, ni in enumerate(seq.word):
        rows[(i + 1) % d][i] = USeries.monomial(seq.field, ni)
    return PhiModule(seq.field, seq.e, seq.r, SeriesMatrix.from_rows(seq.field, rows, cols=d))


def simple_from_module(m: PhiModule) -> Optional[SimpleSeq]:
    """Recognise the cyclic monomial shape of build_module, or None"""
    d = m.d
    if d == 0:
        return None
    word = []
    for i in range(d):
        for row in range(d):
            x = m.frob[row, i]
            if row == (i + 1) % d:
                if not (x.is_exact and x.is_monomial() and x.leading_coefficient() == 1):
                    return None
                word.append(x.lowest)
            elif not x.is_exact_zero():
                return None
    if smallest_period(word) != d or min(word) < 0:
        return None
    if m.height is not None and max(word) > m.height:
        return None
    return SimpleSeq(m.field, m.e, m.r, tuple(word))


def _require_s(seq: SimpleSeq) -> None:
    if not seq.in_s:
        raise NotInSError(
            f"{seq} is not in S: the fractions t_i are not pairwise distinct",
            witness=[str(t) for t in seq.t],
        )


def iso_simple(a: SimpleSeq, b: SimpleSeq) -> Optional[int]:
    """Smallest shift k with n'_{i+k} = n_i, or None when M(a) and M(b) differ"""
    if not a.same_category(b):
        raise ParameterMismatchError("sequences over different (k, e, r)")
    _require_s(a)
    _require_s(b)
    if a.d != b.d:
        return None
    d = a.d
    for shift in range(d):
        if all(b.entry(i + shift) == a.entry(i) for i in range(d)):
            return shift
    return None


@dataclass(frozen=True)
class FrobSolution:
    """Solutions alpha u^v e_i, alpha ranging over k intersected with F_{p^d}"""
    index: int
    valuation: int
    subfield_degree: int

    @property
    def dimension(self) -> int:
        """Dimension over F_p of the solution space"""
        return self.subfield_degree


def solve_frob_eq(seq: SimpleSeq, exponent: int, laurent: bool = False) -> Optional[FrobSolution]:
    """Nonzero solutions x of phi^d(x) = u^exponent x in M(n), or in M(n)[1/u] when laurent"""
    _require_s(seq)
    modulus = seq.modulus
    for i, si in enumerate(seq.s):
        v, rest = divmod(exponent - si, modulus)
        if rest == 0 and (laurent or v >= 0):
            return FrobSolution(i, v, math.gcd(seq.f, seq.d))
    return None


@dataclass(frozen=True)
class ClosedForm:
    """Max or Min of M(n) as M(m) embedded by e'_i = u^{-q_i} e_i"""
    seq: SimpleSeq
    q: Tuple[int, ...]

    def relation_holds(self, source: SimpleSeq) -> bool:
        d, p = source.d, source.p
        return all(
            p * self.q[i] + self.seq.entry(i) == self.q[(i + 1) % d] + source.entry(i)
            for i in range(d)
        )


def max_closed_form(seq: SimpleSeq) -> ClosedForm:
    """m_i = floor(p s'_i / (p^d-1)) and q_i = (s_i - s'_i) / (p^d-1), s'_i = s_i mod (p^d-1)"""
    _require_s(seq)
    modulus = seq.modulus
    q: List[int] = []
    m: List[int] = []
    for si in seq.s:
        reduced = si % modulus
        q.append((si - reduced) // modulus)
        m.append(seq.p * reduced // modulus)
    result = ClosedForm(seq.with_word(m), tuple(q))
    if not result.relation_holds(seq):
        raise KisinError(f"closed form for {seq} violates p*q_i + m_i = q_(i+1) + n_i")
    logger.debug("Max of %s is %s with shifts %s", seq, result.seq, result.q)
    return result


def dual_seq(seq: SimpleSeq) -> SimpleSeq:
    if seq.height is None:
        raise UnboundedHeightError("the dual sequence needs a finite height bound r")
    return seq.with_word([seq.height - x for x in seq.word])


def min_closed_form(seq: SimpleSeq) -> ClosedForm:
    """Dual of the maximal object of the dual sequence"""
    top = max_closed_form(dual_seq(seq))
    result = ClosedForm(dual_seq(top.seq), tuple(-x for x in top.q))
    if not result.relation_holds(seq):
        raise KisinError(f"closed form for {seq} violates p*q_i + m_i = q_(i+1) + n_i")
    return result


def same_max_class(a: SimpleSeq, b: SimpleSeq) -> bool:
    """t_0(a) is one of t_0(b), ..., t_(d-1)(b).

    p t_i = t_(i+1) mod Z, so the t_i(b) are the orbit of t_0(b) under
    multiplication by p, and comparing with each of them covers every shift.
    """
    if not a.same_category(b):
        return False
    ta = a.t[0]
    return any((ta - tb) % 1 == 0 for tb in b.t)


def tame_weights(seq: SimpleSeq) -> Tuple[int, ...]:
    """Entries of the maximal sequence as a sorted multiset.

    Shifting n permutes the entries of Max cyclically, so only the multiset
    is an invariant of the isomorphism class.
    """
    return tuple(sorted(max_closed_form(seq).seq.word))


def weights_from_t(seq: SimpleSeq) -> Tuple[int, ...]:
    """Base-p digits of the repeating block of t_0, most significant first.

    The digits read off t_0 are the maximal entries in the order starting at
    e_0, so unlike tame_weights the result depends on the chosen basis.
    """
    reduced = seq.s[0] % seq.modulus
    digits = []
    for _ in range(seq.d):
        reduced, digit = divmod(reduced, seq.p)
        digits.append(digit)
    return tuple(reversed(digits))


def end_dimension_oracle(seq: SimpleSeq) -> int:
    """dim_{F_p} End(M(n)) for n in S"""
    _require_s(seq)
    return math.gcd(seq.f, seq.d)


def enumerate_sequences(field: FieldParams, e: int, r: int, max_d: int) -> Iterator[SimpleSeq]:
    """Every word over [0, e*r] with smallest period equal to its length, length <= max_d"""
    h = e * r
    for d in range(1, max_d + 1):
        for word in itertools.product(range(h + 1), repeat=d):
            if smallest_period(word) == d:
                yield SimpleSeq(field, e, r, word)


def _fmt_word(word: Sequence[int]) -> str:
    return " ".join(str(x) for x in word)


def classification_csv(seqs: Sequence[SimpleSeq]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "d", "s", "t", "in_S", "in_Smax", "in_Smin",
                     "max", "max_shift", "min", "min_shift", "weights"])
    for seq in seqs:
        top = bottom = shifts_top = shifts_bottom = weights = ""
        if seq.in_s:
            form = max_closed_form(seq)
            top, shifts_top = _fmt_word(form.seq.word), _fmt_word(form.q)
            weights = _fmt_word(tame_weights(seq))
            if seq.r is not None:
                low = min_closed_form(seq)
                bottom, shifts_bottom = _fmt_word(low.seq.word), _fmt_word(low.q)
        writer.writerow([
            _fmt_word(seq.word), seq.d, _fmt_word(seq.s), " ".join(str(t) for t in seq.t),
            int(seq.in_s), int(seq.in_smax), int(seq.in_smin),
            top, shifts_top, bottom, shifts_bottom, weights,
        ])
    return buf.getvalue()
