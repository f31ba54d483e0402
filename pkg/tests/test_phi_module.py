import random

import pytest

from kisinlab.error_handler import (
    DimensionMismatchError,
    HeightViolationError,
    NotAMorphismError,
    ParameterMismatchError,
    UnboundedHeightError,
)
from kisinlab.config_manager import use_settings
from kisinlab.matrix import SeriesMatrix
from kisinlab.models import IsoStatus
from kisinlab.phi_module import (
    PhiModule,
    PhiMorphism,
    apply_phi,
    cokernel,
    cokernel_torsion,
    direct_sum,
    dual,
    dual_morphism,
    extension_build,
    extension_inclusion,
    find_isomorphism,
    hom_dimension,
    hom_precision,
    image,
    is_valid,
    kernel,
    random_phi_module,
    require_valid,
    validate,
)
from kisinlab.series import USeries
from kisinlab.simple import SimpleSeq, build_module

from .helpers import mat, module, vec


def _check(report, name):
    return next(c for c in report.checks if c.name == name)


class TestValidate:
    def test_unit_module(self, F2):
        report = validate(PhiModule.unit(F2))
        assert report.passed
        assert [c.name for c in report.checks] == ["exact_entries", "integral", "determinant", "height"]

    def test_scalar_within_height(self, F3):
        assert validate(PhiModule.scalar(F3, 2, 1, 2)).passed

    def test_scalar_above_height(self, F3):
        report = validate(PhiModule.scalar(F3, 1, 2, 3))
        assert not report.passed
        height = _check(report, "height")
        assert not height.passed
        assert height.witness == 3

    def test_two_by_two_height_witness(self, F2):
        # Smith divisors (1, 4) exceed e*r = 3
        m = module(F2, [["u", "u^2"], ["u^3", "0"]], r=3)
        assert m.divisors == (1, 4)
        report = validate(m)
        assert _check(report, "height").witness == 4
        assert validate(m.with_height(4)).passed

    def test_negative_powers(self, F2):
        report = validate(module(F2, [["u^-1"]]))
        assert not _check(report, "integral").passed
        assert not _check(report, "height").passed

    def test_singular(self, F2):
        report = validate(module(F2, [["u", "u"], ["u", "u"]]))
        assert not _check(report, "determinant").passed

    def test_inexact_entries(self, F2):
        report = validate(module(F2, [["1 + O(u^4)"]]))
        assert not _check(report, "exact_entries").passed

    def test_unbounded_height(self, F2):
        assert validate(PhiModule.scalar(F2, 1, None, 40)).passed

    def test_require_valid(self, F2):
        with pytest.raises(HeightViolationError):
            require_valid(PhiModule.scalar(F2, 1, 1, 2))

    def test_random_objects_are_valid(self, F3):
        rng = random.Random(7)
        for _ in range(5):
            assert is_valid(random_phi_module(F3, 1, 2, 2, rng))


class TestFrobenius:
    def test_apply_phi(self, F2):
        m = build_module(SimpleSeq.create((1, 0), p=2, r=1))
        assert apply_phi(m, vec(F2, "1", "0")) == vec(F2, "0", "u")
        assert apply_phi(m, vec(F2, "u^-1", "0")) == vec(F2, "0", "u^-1")

    def test_apply_phi_wrong_length(self, F2):
        with pytest.raises(DimensionMismatchError):
            apply_phi(PhiModule.unit(F2), vec(F2, "1", "1"))


class TestMorphisms:
    def test_identity_is_valid(self, F3):
        m = random_phi_module(F3, 1, 2, 2, random.Random(3))
        ident = PhiMorphism.identity(m)
        assert ident.is_valid()
        assert ident.is_isomorphism()

    def test_non_morphism_rejected(self, F2):
        m = PhiModule.unit(F2)
        with pytest.raises(NotAMorphismError):
            PhiMorphism.create(m, m, mat(F2, [["u"]]))

    def test_category_mismatch(self, F2, F3):
        with pytest.raises(ParameterMismatchError):
            PhiMorphism.create(PhiModule.unit(F2), PhiModule.unit(F3), mat(F2, [["1"]]))

    def test_multiplication_by_u(self, F2):
        f = PhiMorphism.create(PhiModule.scalar(F2, 1, 1, 1), PhiModule.unit(F2), mat(F2, [["u"]]))
        assert not f.is_isomorphism()
        assert cokernel_torsion(f) == (1,)
        assert cokernel(f).module.d == 0


class TestHom:
    def test_end_of_unit(self, F2):
        assert hom_dimension(PhiModule.unit(F2), PhiModule.unit(F2)) == 1

    @pytest.mark.parametrize("f, expected", [(1, 1), (2, 2)])
    def test_end_of_simple(self, f, expected):
        m = build_module(SimpleSeq.create((1, 0), p=2, f=f, r=1))
        assert hom_dimension(m, m) == expected

    def test_shifted_word_is_isomorphic(self):
        a = build_module(SimpleSeq.create((1, 0), p=2, r=1))
        b = build_module(SimpleSeq.create((0, 1), p=2, r=1))
        result = find_isomorphism(a, b)
        assert result.status is IsoStatus.ISOMORPHIC
        assert result.morphism.is_isomorphism()
        assert result.morphism.is_valid()

    def test_different_words(self):
        a = build_module(SimpleSeq.create((1, 0), p=2, r=2))
        b = build_module(SimpleSeq.create((2, 0), p=2, r=2))
        assert find_isomorphism(a, b).status is IsoStatus.NOT_ISOMORPHIC

    def test_rank_mismatch(self, F2):
        a = PhiModule.unit(F2)
        b = PhiModule.unit(F2, d=2)
        assert find_isomorphism(a, b).status is IsoStatus.NOT_ISOMORPHIC

    @pytest.mark.parametrize("n", [(1, 0), (2, 1), (1, 1, 0)])
    def test_dimension_stable_under_precision_doubling(self, n):
        m = build_module(SimpleSeq.create(n, p=2, r=3))
        _, N = hom_precision(m, m)
        with use_settings(working_precision=N):
            low = hom_dimension(m, m)
        with use_settings(working_precision=2 * N):
            high = hom_dimension(m, m)
        assert low == high == 1

    def test_random_dimension_stable_under_precision_doubling(self, F3, rng):
        a = random_phi_module(F3, 1, 2, 2, rng)
        b = random_phi_module(F3, 1, 2, 2, rng)
        _, N = hom_precision(a, b)
        with use_settings(working_precision=N):
            low = hom_dimension(a, b)
        with use_settings(working_precision=2 * N):
            high = hom_dimension(a, b)
        assert low == high


class TestKernelImageCokernel:
    def test_identity(self, F3):
        m = random_phi_module(F3, 1, 2, 2, random.Random(11))
        ident = PhiMorphism.identity(m)
        assert kernel(ident)[0].d == 0
        sub, incl = image(ident)
        assert sub.d == 2
        assert incl.is_isomorphism()
        assert cokernel(ident).module.d == 0

    def test_quotient_of_extension(self, F2):
        sub = PhiModule.unit(F2)
        total = extension_build(sub, sub, mat(F2, [["u"]]))
        incl = extension_inclusion(sub, total)
        assert incl.is_valid()
        quot = cokernel(incl)
        assert quot.torsion == ()
        assert quot.module.frob[0, 0] == USeries.one(F2)
        assert quot.projection.is_valid()

    def test_kernel_of_projection(self, F2):
        sub = PhiModule.unit(F2)
        total = extension_build(sub, sub, mat(F2, [["u"]]))
        proj = cokernel(extension_inclusion(sub, total)).projection
        ker, incl = kernel(proj)
        assert ker.d == 1
        assert incl.is_valid()

    def test_rank_of_kernel_and_image(self, F3, rng):
        a = random_phi_module(F3, 1, 2, 1, rng)
        b = random_phi_module(F3, 1, 2, 1, rng)
        total = direct_sum(a, b)
        morphisms = [
            PhiMorphism.identity(total),
            PhiMorphism.zero(total, total),
            PhiMorphism.create(total, a, mat(F3, [["1", "0"]])),
            PhiMorphism.create(b, total, mat(F3, [["0"], ["1"]])),
        ]
        for f in morphisms:
            assert kernel(f)[0].d + image(f)[0].d == f.source.d


class TestDuality:
    def test_scalar(self, F2):
        assert dual(PhiModule.scalar(F2, 1, 3, 1)).frob == PhiModule.scalar(F2, 1, 3, 2).frob

    def test_simple(self):
        m = build_module(SimpleSeq.create((2, 1), p=2, r=3))
        expected = build_module(SimpleSeq.create((1, 2), p=2, r=3))
        assert dual(m).frob == expected.frob

    def test_double_dual(self, F3):
        m = random_phi_module(F3, 1, 2, 2, random.Random(5))
        assert find_isomorphism(m, dual(dual(m))).status is IsoStatus.ISOMORPHIC

    def test_needs_finite_height(self, F2):
        with pytest.raises(UnboundedHeightError):
            dual(PhiModule.unit(F2, r=None))

    def test_dual_morphism_reverses_arrows(self, F3, rng):
        a = random_phi_module(F3, 1, 2, 1, rng)
        total = direct_sum(a, random_phi_module(F3, 1, 2, 1, rng))
        proj = PhiMorphism.create(total, a, mat(F3, [["1", "0"]]))
        incl = PhiMorphism.create(a, total, mat(F3, [["1"], ["0"]]))
        for f in (proj, incl):
            g = dual_morphism(f)
            assert (g.source, g.target) == (dual(f.target), dual(f.source))
            assert g.is_valid()
        composite = dual_morphism(incl.compose(proj))
        assert composite.mat == dual_morphism(proj).compose(dual_morphism(incl)).mat


class TestConstructions:
    def test_direct_sum(self, F2):
        total = direct_sum(PhiModule.unit(F2), PhiModule.scalar(F2, 1, 1, 1))
        assert total.frob == SeriesMatrix.monomial_diagonal(F2, [0, 1])

    def test_direct_sum_needs_same_height(self, F2):
        with pytest.raises(ParameterMismatchError):
            direct_sum(PhiModule.unit(F2, r=1), PhiModule.unit(F2, r=2))

    def test_extension_height_checked(self, F2):
        top = PhiModule.scalar(F2, 1, 1, 1)
        with pytest.raises(HeightViolationError):
            extension_build(top, top, mat(F2, [["1"]]))

    def test_extension_rejects_laurent_cocycle(self, F2):
        with pytest.raises(NotAMorphismError):
            extension_build(PhiModule.unit(F2), PhiModule.unit(F2), mat(F2, [["u^-1"]]))
