from fractions import Fraction

import pytest

from kisinlab.error_handler import NotInSError, ParameterMismatchError, UnboundedHeightError
from kisinlab.field import field_params
from kisinlab.lattices import is_maximal, is_minimal
from kisinlab.phi_module import PhiModule, apply_phi, find_isomorphism, hom_dimension, validate
from kisinlab.series import USeries
from kisinlab.simple import (
    SimpleSeq,
    build_module,
    classification_csv,
    dual_seq,
    end_dimension_oracle,
    enumerate_sequences,
    iso_simple,
    max_closed_form,
    min_closed_form,
    same_max_class,
    simple_from_module,
    smallest_period,
    solve_frob_eq,
    tame_weights,
    weights_from_t,
)


def seq(*n, p=2, f=1, r=3):
    return SimpleSeq.create(n, p=p, f=f, r=r)


class TestInvariants:
    def test_smallest_period(self):
        assert smallest_period((1, 0, 1, 0)) == 2
        assert smallest_period((2, 2, 2)) == 1
        assert smallest_period((1, 2, 3)) == 3

    def test_repeated_word_is_reduced(self):
        s = seq(2, 1, 2, 1)
        assert s.d == 2
        assert s.word == (2, 1)
        assert str(s) == "M(2,1)"

    def test_s_and_t(self):
        s = seq(2, 1)
        assert s.s == (5, 4)
        assert s.t == (Fraction(2, 3), Fraction(1, 3))
        assert s.in_s
        assert not s.in_smax
        assert not s.in_smin

    def test_not_in_s(self):
        # t = (0, 0)
        assert not seq(3, 0).in_s

    def test_smax_and_smin(self):
        assert seq(1, 0).in_smax
        assert seq(3, 2).in_smin
        # the excluded rank one word (p-1)
        assert not seq(1).in_smax
        assert not seq(2, r=3).in_smin

    def test_entries_bounded_by_height(self):
        with pytest.raises(ParameterMismatchError):
            seq(4, 0, r=3)
        with pytest.raises(ParameterMismatchError):
            seq(-1, 0)
        with pytest.raises(ParameterMismatchError):
            SimpleSeq.create((), p=2)


class TestModules:
    def test_build_module(self):
        m = build_module(seq(2, 1))
        assert validate(m).passed
        assert m.divisors == (1, 2)

    def test_recognise(self):
        m = build_module(seq(2, 1))
        assert simple_from_module(m) == seq(2, 1)

    def test_recognise_rejects_other_shapes(self, F2):
        assert simple_from_module(PhiModule.unit(F2, d=2)) is None
        assert simple_from_module(build_module(seq(1, 1))).word == (1,)


class TestIsomorphism:
    def test_shift(self):
        assert iso_simple(seq(2, 1), seq(1, 2)) == 1
        assert iso_simple(seq(2, 1), seq(2, 1)) == 0

    def test_different_words(self):
        assert iso_simple(seq(2, 1), seq(3, 1)) is None
        assert iso_simple(seq(2, 1), seq(2)) is None

    def test_outside_s(self):
        with pytest.raises(NotInSError):
            iso_simple(seq(2, 1), seq(3, 0))

    def test_category_mismatch(self):
        with pytest.raises(ParameterMismatchError):
            iso_simple(seq(2, 1), seq(2, 1, r=4))

    def test_agrees_with_hom_space(self):
        words = [s for s in enumerate_sequences(field_params(2), 1, 2, 2) if s.in_s]
        for a in words:
            for b in words:
                found = find_isomorphism(build_module(a), build_module(b))
                assert (iso_simple(a, b) is not None) == found.isomorphic, f"{a} {b}"
                if found.isomorphic:
                    assert found.morphism.is_isomorphism()


class TestFrobeniusEquation:
    def test_solution(self):
        sol = solve_frob_eq(seq(1, 0, r=1), 2)
        assert (sol.index, sol.valuation) == (0, 0)
        assert sol.dimension == 1

    def test_solution_over_f4(self):
        sol = solve_frob_eq(seq(1, 0, f=2, r=1), 2)
        assert sol.subfield_degree == 2

    def test_no_solution(self):
        assert solve_frob_eq(seq(1, 0, r=1), 0) is None

    def test_laurent_solution(self):
        assert solve_frob_eq(seq(1, 0, r=1), -1) is None
        sol = solve_frob_eq(seq(1, 0, r=1), -1, laurent=True)
        assert (sol.index, sol.valuation) == (0, -1)

    def test_trivial_word(self):
        sol = solve_frob_eq(seq(0, r=1), 0)
        assert (sol.index, sol.valuation) == (0, 0)

    @pytest.mark.parametrize("n", [(1, 0), (2, 1), (1, 1, 0), (2, 0, 1)])
    def test_matches_search_over_monomials(self, n):
        s = seq(*n, r=2)
        m = build_module(s)
        for exponent in range(3 * s.modulus):
            found = []
            for i in range(s.d):
                for v in range(exponent + 1):
                    y = [USeries.zero(s.field)] * s.d
                    y[i] = USeries.monomial(s.field, v)
                    for _ in range(s.d):
                        y = apply_phi(m, y)
                    rest = [y[j] for j in range(s.d) if j != i]
                    if all(z.is_zero() for z in rest) and y[i] == USeries.monomial(s.field, v + exponent):
                        found.append((i, v))
            sol = solve_frob_eq(s, exponent)
            if not found:
                assert sol is None, exponent
            else:
                assert (sol.index, sol.valuation) == found[0], exponent


class TestClosedForms:
    def test_max(self):
        form = max_closed_form(seq(2, 1))
        assert form.seq.word == (1, 0)
        assert form.q == (1, 1)
        assert form.relation_holds(seq(2, 1))

    def test_max_of_shifted_word(self):
        form = max_closed_form(seq(1, 2))
        assert form.seq.word == (0, 1)
        assert form.q == (1, 1)

    def test_min(self):
        form = min_closed_form(seq(2, 1))
        assert form.seq.word == (3, 2)
        assert form.q == (-1, -1)

    def test_dual_seq(self):
        assert dual_seq(seq(2, 1)).word == (1, 2)
        with pytest.raises(UnboundedHeightError):
            dual_seq(seq(2, 1, r=None))

    def test_max_is_in_smax(self):
        field = field_params(3)
        for s in enumerate_sequences(field, 1, 2, 2):
            if s.in_s:
                form = max_closed_form(s)
                assert all(0 <= x <= 2 for x in form.seq.word)
                assert form.relation_holds(s)

    def test_closed_form_outside_s(self):
        with pytest.raises(NotInSError):
            max_closed_form(seq(3, 0))


class TestClasses:
    def test_same_max_class(self):
        assert same_max_class(seq(2, 1), seq(3, 2))
        assert same_max_class(seq(2, 1), seq(1, 2))
        assert not same_max_class(seq(2, 1), seq(3, 0))
        assert not same_max_class(seq(1, 0), seq(1))
        assert not same_max_class(seq(2, 1), seq(2, 1, r=4))

    @pytest.mark.parametrize("p,r", [(2, 2), (3, 1)])
    def test_same_max_class_matches_isomorphic_max(self, p, r):
        words = [s for s in enumerate_sequences(field_params(p), 1, r, 3) if s.in_s]
        for a in words:
            for b in words:
                tops = max_closed_form(a).seq, max_closed_form(b).seq
                assert same_max_class(a, b) == (iso_simple(*tops) is not None), f"{a} {b}"

    def test_weights(self):
        assert tame_weights(seq(1, 0, r=1)) == (0, 1)
        assert tame_weights(seq(2, 1)) == (0, 1)
        assert weights_from_t(seq(2, 1)) == (1, 0)

    def test_end_dimension(self):
        assert end_dimension_oracle(seq(1, 0, r=1)) == 1
        assert end_dimension_oracle(seq(1, 0, f=2, r=1)) == 2

    @pytest.mark.parametrize("n,f", [((1, 0), 1), ((1, 0), 2), ((1, 1, 0), 1), ((2, 1), 2)])
    def test_end_dimension_against_hom(self, n, f):
        s = seq(*n, f=f, r=2)
        m = build_module(s)
        assert hom_dimension(m, m) == end_dimension_oracle(s)


class TestEnumeration:
    def test_counts(self):
        field = field_params(2)
        words = [s.word for s in enumerate_sequences(field, 1, 1, 2)]
        # period 1: (0), (1); period 2: (0,1), (1,0)
        assert words == [(0,), (1,), (0, 1), (1, 0)]

    def test_classification_csv(self):
        text = classification_csv([seq(2, 1), seq(3, 0)])
        lines = text.splitlines()
        assert lines[0].split(",")[:3] == ["n", "d", "s"]
        assert lines[1].startswith("2 1,2,5 4,")
        assert "1 0,1 1,3 2,-1 -1,0 1" in lines[1]
        assert lines[2].endswith(",,,,,")

    @pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
    def test_smax_and_smin_inside_s(self, p, r):
        for s in enumerate_sequences(field_params(p), 1, r, 3):
            if s.in_smax or s.in_smin:
                assert s.in_s, str(s)

    @pytest.mark.slow
    @pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2)])
    def test_census_agrees_with_smax_and_smin(self, p, r):
        for s in enumerate_sequences(field_params(p), 1, r, 2):
            if not s.in_s:
                continue
            m = build_module(s)
            assert is_maximal(m, method="census") == s.in_smax, str(s)
            assert is_minimal(m, method="census") == s.in_smin, str(s)
