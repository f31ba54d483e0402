"""
Reproduction scenarios
Named, self-checking runs of the worked examples and of the structural
claims about F^r. Each scenario returns a ScenarioResult whose checks
compare expected and computed values exactly.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .config_manager import get_settings
from .error_handler import CensusTooLargeError, ScenarioFailure
from .field import field_params
from .lattices import (
    Lattice,
    chain_bound,
    enumerate_fr,
    is_maximal,
    is_minimal,
    lattice_in_fr,
    lattice_intersection,
    lattice_sum,
    longest_chain,
    max_lattice,
    max_r,
    min_lattice,
    min_r,
)
from .matrix import SeriesMatrix
from .models import ScenarioResult
from .phi_module import (
    PhiModule,
    cokernel,
    dual,
    extension_build,
    extension_inclusion,
    is_isomorphic,
    random_extension,
    random_phi_module,
    validate,
)
from .series import USeries
from .simple import (
    SimpleSeq,
    build_module,
    enumerate_sequences,
    max_closed_form,
    min_closed_form,
)
from .utils import progress_iter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    run: Callable[[random.Random], ScenarioResult]


SCENARIOS: Dict[str, Scenario] = {}


def scenario(name: str, description: str) -> Callable[[Callable[[random.Random], ScenarioResult]],
                                                      Callable[[random.Random], ScenarioResult]]:
    def register(fn: Callable[[random.Random], ScenarioResult]) -> Callable[[random.Random], ScenarioResult]:
        SCENARIOS[name] = Scenario(name, description, fn)
        return fn
    return register


def scenario_names() -> List[str]:
    return sorted(SCENARIOS)


def run_scenario(name: str, rng: Optional[random.Random] = None) -> ScenarioResult:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(scenario_names())}")
    rng = rng if rng is not None else random.Random(get_settings().random_seed)
    logger.info("running scenario %s", name)
    result = SCENARIOS[name].run(rng)
    logger.info("scenario %s: %s", name, "passed" if result.passed else "FAILED")
    return result


def require_passed(result: ScenarioResult) -> ScenarioResult:
    if not result.passed:
        bad = [c.label for c in result.checks if not c.ok]
        raise ScenarioFailure(f"scenario {result.name} failed: {', '.join(bad) or 'no checks ran'}",
                              witness=[c.to_dict() for c in result.checks if not c.ok])
    return result


def _progress(items: Sequence, desc: str) -> Iterator:
    return progress_iter(items, desc, total=len(items), enabled=get_settings().show_progress)


# worked examples

def quotient_pair(p: int, e: int = 1, r: int = 1) -> Tuple[PhiModule, PhiModule, PhiModule]:
    """0 -> unit -> M -> M' -> 0 with phi(e_2) = u e_1 + u^(p-1) e_2"""
    F = field_params(p)
    sub = PhiModule.unit(F, e, r)
    quot = PhiModule.scalar(F, e, r, p - 1)
    cocycle = SeriesMatrix.from_rows(F, [[USeries.monomial(F, 1)]])
    total = extension_build(sub, quot, cocycle)
    return sub, total, quot


@scenario("quotient-not-maximal",
          "maximal sub and total object whose quotient is not maximal; Max(quotient) is the unit object")
def quotient_not_maximal(rng: random.Random) -> ScenarioResult:
    result = ScenarioResult("quotient-not-maximal", SCENARIOS["quotient-not-maximal"].description)
    p, e, r = 2, 1, 1
    sub, total, _ = quotient_pair(p, e, r)
    quot = cokernel(extension_inclusion(sub, total)).module
    result.expect("sub is maximal", True, is_maximal(sub, method="census"))
    result.expect("total is maximal", True, is_maximal(total, method="census"))
    result.expect("quotient is maximal", False, is_maximal(quot, method="census"))
    top = max_r(quot, method="census")
    result.expect("Max(quotient) lattice", Lattice.scaled(quot, -1), top.lattice)
    result.expect("Max(quotient) is the unit object", True,
                  is_isomorphic(top.module, PhiModule.unit(quot.field, e, r)))
    # 0 -> quot^v -> total^v -> sub^v -> 0: Min is not middle-exact
    result.expect("dual of total is minimal", True, is_minimal(dual(total), method="census"))
    result.expect("dual of quotient is minimal", False, is_minimal(dual(quot), method="census"))
    return result


def height_shift_module(p: int, e: int, r: int) -> PhiModule:
    """phi(e_1) = u e_1 + u^(er) e_2, phi(e_2) = u^p e_1"""
    F = field_params(p)
    u = lambda n: USeries.monomial(F, n)  # noqa: E731
    zero = USeries.zero(F)
    return PhiModule.from_rows(F, e, r, [[u(1), u(p)], [u(e * r), zero]])


@scenario("max-r-vs-r-plus-1",
          "phi(e1) = u e1 + u^er e2, phi(e2) = u^p e1 against the height bounds r and r+1")
def max_r_vs_r_plus_1(rng: random.Random) -> ScenarioResult:
    result = ScenarioResult("max-r-vs-r-plus-1", SCENARIOS["max-r-vs-r-plus-1"].description)
    # er >= p
    p, e, r = 2, 1, 2
    at_r = height_shift_module(p, e, r)
    at_next = at_r.with_height(r + 1)
    result.expect("Smith divisors", (1, e * r + p - 1), tuple(sorted(at_r.divisors)))
    report = validate(at_r)
    result.expect("valid at height r", False, report.passed)
    result.expect("height witness", e * r + p - 1, report.failures()[-1].witness)
    result.expect("valid at height r+1", True, validate(at_next).passed)
    F = at_r.field
    basis = SeriesMatrix.monomial_diagonal(F, [0, -1])
    result.expect("<e1, u^-1 e2> in F^(r+1)", True, lattice_in_fr(Lattice(at_next, basis)))
    result.expect("<e1, u^-1 e2> in F^r", False, lattice_in_fr(Lattice(at_r, basis)))
    result.expect("maximal at height r+1", False, is_maximal(at_next, method="census"))
    top = max_r(at_next, method="census")
    result.expect("Max at height r+1 is u^-1 M", Lattice.scaled(at_next, -1), top.lattice)
    result.notes.append(f"Max at height {r + 1}: {top.lattice.describe()}")
    return result


@scenario("rigidity-er-lt-p-1", "er < p-1: Max = Min = M for random objects (p=5, e=1, r=2)")
def rigidity(rng: random.Random, samples: int = 50) -> ScenarioResult:
    result = ScenarioResult("rigidity-er-lt-p-1", SCENARIOS["rigidity-er-lt-p-1"].description)
    F = field_params(5)
    moved = []
    for k in _progress(range(samples), "rigidity"):
        m = random_phi_module(F, 1, 2, rng.randint(1, 3), rng)
        if not (max_r(m, method="census").is_identity and min_r(m, method="census").is_identity):
            moved.append(k)
    result.expect("objects with Max = Min = M", samples, samples - len(moved))
    return result


# classification of simple objects

def compmax_rows(primes: Sequence[int] = (2, 3), heights: Sequence[int] = (1, 2, 3),
                 max_d: int = 3, e: int = 1) -> Iterator[Tuple[SimpleSeq, bool, bool]]:
    """(n, Max agrees, Min agrees) for every n in S of the range"""
    for p in primes:
        F = field_params(p)
        for r in heights:
            for seq in enumerate_sequences(F, e, r, max_d):
                if not seq.in_s:
                    continue
                m = build_module(seq)
                top = max_closed_form(seq)
                bottom = min_closed_form(seq)
                try:
                    found_top, _ = max_lattice(m, method="census")
                    found_bottom, _ = min_lattice(m, method="census")
                except CensusTooLargeError:
                    logger.debug("skipping %s: census too large", seq)
                    continue
                yield (seq,
                       found_top == Lattice.diagonal(m, [-q for q in top.q]),
                       found_bottom == Lattice.diagonal(m, [-q for q in bottom.q]))


@scenario("compmax-table", "closed forms of Max and Min of M(n) against the census, n in S, d <= 3")
def compmax_table(rng: random.Random, primes: Sequence[int] = (2, 3), heights: Sequence[int] = (1, 2, 3),
                  max_d: int = 3) -> ScenarioResult:
    result = ScenarioResult("compmax-table", SCENARIOS["compmax-table"].description)
    worked = SimpleSeq.create((2, 1), p=2, r=3)
    result.expect("Max(M(2,1))", (1, 0), max_closed_form(worked).seq.word)
    result.expect("Min(M(2,1))", (3, 2), min_closed_form(worked).seq.word)
    rows = list(compmax_rows(primes, heights, max_d))
    result.expect("Max disagreements", [], [str(s) for s, ok, _ in rows if not ok])
    result.expect("Min disagreements", [], [str(s) for s, _, ok in rows if not ok])
    result.notes.append(f"{len(rows)} sequences compared")
    return result


# structure of F^r

def random_corpus(rng: random.Random, samples: int, max_rank: int = 2) -> List[PhiModule]:
    """p in {2,3}, e <= 2, er <= 4, rank <= max_rank"""
    corpus = []
    for _ in range(samples):
        p = rng.choice((2, 3))
        e = rng.choice((1, 2))
        r = rng.randint(1, 4 // e)
        corpus.append(random_phi_module(field_params(p), e, r, rng.randint(1, max_rank), rng))
    return corpus


@scenario("duality-exchange", "Min(M) = dual of Max of the dual, and M is isomorphic to its double dual")
def duality_exchange(rng: random.Random, samples: int = 12) -> ScenarioResult:
    result = ScenarioResult("duality-exchange", SCENARIOS["duality-exchange"].description)
    mismatched, not_reflexive, skipped = [], [], 0
    for k, m in enumerate(_progress(random_corpus(rng, samples), "duality")):
        try:
            direct, _ = min_lattice(m, method="census")
            via_dual, _ = min_lattice(m, method="duality")
        except CensusTooLargeError:
            skipped += 1
            continue
        if direct != via_dual:
            mismatched.append(k)
        if not is_isomorphic(dual(dual(m)), m):
            not_reflexive.append(k)
    result.expect("Min by census = Min by duality", [], mismatched)
    result.expect("double dual isomorphic", [], not_reflexive)
    result.notes.append(f"{samples - skipped} of {samples} objects checked")
    return result


@scenario("extension-stability", "extensions of maximal objects by maximal objects are maximal")
def extension_stability(rng: random.Random, samples: int = 10) -> ScenarioResult:
    result = ScenarioResult("extension-stability", SCENARIOS["extension-stability"].description)
    checked, failures = 0, []
    for k in _progress(range(samples), "extensions"):
        p = rng.choice((2, 3))
        F = field_params(p)
        r = rng.randint(1, 2)
        sub = max_r(random_phi_module(F, 1, r, 1, rng)).module
        quot = max_r(random_phi_module(F, 1, r, 1, rng)).module
        total = random_extension(sub, quot, rng)
        if total is None:
            continue
        try:
            if not is_maximal(total, method="census"):
                failures.append(k)
        except CensusTooLargeError:
            continue
        checked += 1
    result.expect("non-maximal extensions", [], failures)
    result.notes.append(f"{checked} extensions checked")
    return result


@dataclass
class PosetAudit:
    size: int
    chain: int
    bound: int
    bad_pairs: List[Tuple[int, int]]


def audit_poset(m: PhiModule) -> PosetAudit:
    """Chain length against its bound; pairwise sums and intersections are the lub and glb in F^r"""
    poset = enumerate_fr(m)
    elements = poset.elements
    bad_pairs = []
    for i, j in itertools.combinations(range(poset.size), 2):
        a, b = elements[i], elements[j]
        sup, inf = lattice_sum(a, b), lattice_intersection(a, b)
        if not (lattice_in_fr(sup) and lattice_in_fr(inf)):
            bad_pairs.append((i, j))
            continue
        above = [c for c in elements if c.contains(a) and c.contains(b)]
        below = [c for c in elements if a.contains(c) and b.contains(c)]
        if sup not in elements or inf not in elements:
            bad_pairs.append((i, j))
        elif not all(c.contains(sup) for c in above) or not all(inf.contains(c) for c in below):
            bad_pairs.append((i, j))
    return PosetAudit(poset.size, longest_chain(poset), chain_bound(m), bad_pairs)


@scenario("chain-bound-audit", "every chain of F^r has at most 1 + d*floor((er+1)/(p-1)) elements")
def chain_bound_audit(rng: random.Random, samples: int = 6) -> ScenarioResult:
    result = ScenarioResult("chain-bound-audit", SCENARIOS["chain-bound-audit"].description)
    corpus = [build_module(SimpleSeq.create((2, 1), p=2, r=3))] + random_corpus(rng, samples)
    over, broken = [], []
    for k, m in enumerate(_progress(corpus, "posets")):
        try:
            audit = audit_poset(m)
        except CensusTooLargeError:
            continue
        if audit.chain > audit.bound:
            over.append(k)
        if audit.bad_pairs:
            broken.append(k)
        result.notes.append(f"object {k}: {audit.size} lattices, longest chain {audit.chain}"
                            f" (bound {audit.bound})")
    result.expect("chains over the bound", [], over)
    result.expect("posets where sum/intersection is not lub/glb", [], broken)
    return result
