import pytest

from kisinlab.error_handler import DimensionMismatchError, RankDeficientError, SingularMatrixError
from kisinlab.matrix import (
    SeriesMatrix,
    adjugate,
    determinant,
    hnf_lattice,
    inverse_laurent,
    reduce_modulo,
    smith_divisors,
    smith_normal_form,
    solve_membership,
)
from kisinlab.phi_module import random_phi_module, random_polynomial

from .helpers import mat, vec


class TestBasics:
    def test_shape_checked(self, F2):
        with pytest.raises(DimensionMismatchError):
            mat(F2, [["1", "u"]]) @ mat(F2, [["1", "u"]])

    def test_identity_product(self, F3):
        a = mat(F3, [["1 + u", "2"], ["u^2", "u"]])
        assert SeriesMatrix.identity(F3, 2) @ a == a
        assert a @ SeriesMatrix.identity(F3, 2) == a

    def test_phi_and_transpose(self, F4):
        a = mat(F4, [["a*u", "1"], ["0", "u"]])
        assert a.phi() == mat(F4, [["a^2*u^2", "1"], ["0", "u^2"]])
        assert a.transpose() == mat(F4, [["a*u", "0"], ["1", "u"]])

    def test_integrality(self, F2):
        assert mat(F2, [["u", "1"], ["0", "u"]]).is_integral()
        assert not mat(F2, [["u^-1", "1"], ["0", "u"]]).is_integral()
        assert mat(F2, [["u^-1", "1"], ["0", "u^2"]]).min_order() == -1


class TestDeterminant:
    def test_upper_triangular(self, F2):
        assert determinant(mat(F2, [["u", "1"], ["0", "u"]])) == mat(F2, [["u^2"]])[0, 0]

    def test_sign(self, F3):
        assert determinant(mat(F3, [["0", "1"], ["1", "0"]])) == mat(F3, [["2"]])[0, 0]

    def test_adjugate_identity(self, F5):
        a = mat(F5, [["1 + u", "2"], ["3*u", "u^2"]])
        det = determinant(a)
        assert a @ adjugate(a) == SeriesMatrix.identity(F5, 2).scale(det)


class TestSmith:
    def test_divisors(self, F2):
        assert smith_divisors(mat(F2, [["u", "1"], ["0", "u"]])) == (0, 2)

    def test_divisors_of_laurent_matrix(self, F2):
        assert smith_divisors(mat(F2, [["u^-1", "0"], ["0", "u^3"]])) == (-1, 3)

    def test_reassemble(self, F3):
        a = mat(F3, [["1 + u", "u"], ["u^2", "u + u^3"]])
        snf = smith_normal_form(a)
        assert snf.reassemble().agrees_with(a)
        assert snf.divisors == tuple(sorted(snf.divisors))

    def test_singular(self, F2):
        with pytest.raises(SingularMatrixError):
            smith_normal_form(mat(F2, [["u", "u"], ["u", "u"]]))


class TestInverse:
    def test_triangular_inverse_is_exact(self, F3):
        inv = inverse_laurent(mat(F3, [["u", "1"], ["0", "u"]]))
        assert inv.is_exact
        assert inv == mat(F3, [["u^-1", "2*u^-2"], ["0", "u^-1"]])

    def test_monomial_determinant(self, F2):
        a = mat(F2, [["0", "u^2"], ["u", "0"]])
        assert inverse_laurent(a) == mat(F2, [["0", "u^-1"], ["u^-2", "0"]])

    def test_singular(self, F2):
        with pytest.raises(SingularMatrixError):
            inverse_laurent(mat(F2, [["1", "1"], ["1", "1"]]))


class TestLatticeBases:
    def test_hnf_of_redundant_generators(self, F2):
        gens = mat(F2, [["1", "0", "u"], ["1", "1", "0"]])
        assert hnf_lattice(gens) == SeriesMatrix.identity(F2, 2)

    def test_hnf_of_diagonal(self, F2):
        gens = mat(F2, [["u^-1", "0"], ["0", "u"]])
        assert hnf_lattice(gens) == mat(F2, [["u^-1", "0"], ["0", "u"]])

    def test_hnf_is_canonical(self, F3):
        one = mat(F3, [["u", "1"], ["0", "u^2"]])
        other = mat(F3, [["u + u^2", "1 + 2*u^3"], ["u^2", "u^2"]])
        assert hnf_lattice(one) == hnf_lattice(one @ mat(F3, [["1", "0"], ["1", "1"]]))
        assert hnf_lattice(other).is_upper_triangular()

    def test_rank_deficient(self, F2):
        with pytest.raises(RankDeficientError):
            hnf_lattice(mat(F2, [["1", "u"], ["1", "u"]]))

    def test_membership(self, F2):
        basis = mat(F2, [["u", "0"], ["0", "1"]])
        assert solve_membership(basis, vec(F2, "1", "0")) is None
        assert solve_membership(basis, vec(F2, "u^2", "1 + u")) == vec(F2, "u", "1 + u")

    def test_reduce_modulo(self, F2):
        basis = mat(F2, [["u", "0"], ["0", "1"]])
        rest = reduce_modulo(basis, vec(F2, "1 + u", "u^-1"))
        assert rest[0] == vec(F2, "1")[0]
        assert rest[1] == vec(F2, "u^-1")[0]

    def test_hnf_ignores_change_of_generators(self, F3, rng):
        for _ in range(10):
            gens = random_phi_module(F3, 1, 3, 2, rng).frob
            unimodular = random_phi_module(F3, 1, 1, 2, rng, exponents=[0, 0]).frob
            assert hnf_lattice(gens @ unimodular) == hnf_lattice(gens)

    def test_membership_recovers_coordinates(self, F3, rng):
        for _ in range(10):
            basis = hnf_lattice(random_phi_module(F3, 1, 3, 2, rng).frob)
            x = tuple(random_polynomial(F3, rng, 3) for _ in range(2))
            assert solve_membership(basis, basis.apply(x)) == x
