"""
Tests for exact linear algebra over Q, Z and Q(zeta_n).
"""

from fractions import Fraction

import pytest

from core.exceptions import InconsistentSystemError, InputError, MalformedMatrixError, RankDeficientError
from cyclo.numbers import CycNum
from zlinalg.cyclomatrix import CycMatrix, solve_left_cyc, split_vector
from zlinalg.normalforms import hnf, int_det, int_matmul, invariant_factors, is_hnf, pivot_product, snf
from zlinalg.rational import (
    inverse,
    kernel,
    left_kernel,
    left_kernel_mod_p,
    matmul,
    rank,
    rank_mod_p,
    rref,
    solve_left,
)


def random_int_matrix(rng, m, n, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


class TestRational:
    """Tests for matrices over Q."""

    def test_rref_and_rank(self):
        """Test echelon form drops dependent rows."""
        reduced, pivots = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert pivots == (0, 1)
        assert reduced == [[1, 0, 1], [0, 1, 1]]
        assert rank([[1, 2], [2, 4]]) == 1

    def test_kernels(self, rng):
        """Test right and left null spaces annihilate the matrix."""
        for _ in range(10):
            A = random_int_matrix(rng, 3, 5)
            for v in kernel(A):
                assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
            assert len(kernel(A)) == 5 - rank(A)
            B = random_int_matrix(rng, 5, 3)
            for y in left_kernel(B):
                assert matmul([y], B) == [[0, 0, 0]]

    def test_inverse(self):
        """Test a 2x2 inverse."""
        assert inverse([[2, 1], [1, 1]]) == [[1, -1], [-1, 2]]
        with pytest.raises(RankDeficientError):
            inverse([[1, 2], [2, 4]])

    def test_solve_left(self):
        """Test X A = B and its failure modes."""
        a = [[1, 1, 0], [0, 1, 1]]
        assert solve_left(a, [[1, 2, 1]]) == [[1, 1]]
        with pytest.raises(InconsistentSystemError):
            solve_left(a, [[1, 0, 1]])
        with pytest.raises(RankDeficientError):
            solve_left([[1, 1], [2, 2]], [[1, 1]])
        with pytest.raises(MalformedMatrixError):
            solve_left(a, [[1, 2]])

    def test_fractions(self):
        """Test rational entries stay exact."""
        assert inverse([[Fraction(1, 2), 0], [0, 3]]) == [[2, 0], [0, Fraction(1, 3)]]

    def test_mod_p(self):
        """Test ranks and left kernels over F_p."""
        assert rank_mod_p([[1, 2], [3, 6]], 5) == 1
        assert rank_mod_p([[1, 2], [3, 4]], 2) == 1
        assert rank_mod_p([[1, 2], [3, 4]], 3) == 2
        (c,) = left_kernel_mod_p([[1, 2], [3, 6]], 5)
        assert all((c[0] * x + c[1] * y) % 5 == 0 for x, y in zip([1, 2], [3, 6]))
        with pytest.raises(InputError):
            rank_mod_p([[1]], 4)


class TestNormalForms:
    """Tests for Hermite and Smith normal forms."""

    def test_hnf_random(self, rng):
        """Test H = U A with U unimodular and H in HNF."""
        for _ in range(20):
            A = random_int_matrix(rng, 4, 5)
            result = hnf(A)
            assert is_hnf(result.H)
            assert int_matmul(result.U, A) == result.H
            assert abs(int_det(result.U)) == 1
            assert result.rank == rank(A)

    def test_hnf_example(self):
        """Test a small example by hand."""
        result = hnf([[2, 4], [1, 1]])
        assert result.H == [[1, 1], [0, 2]]
        assert pivot_product(result.H) == 2

    def test_is_hnf(self):
        """Test the HNF conditions."""
        assert is_hnf([[1, 0, 3], [0, 2, 1]])
        assert not is_hnf([[1, 3], [0, 2]])
        assert not is_hnf([[0, 1], [1, 0]])
        with pytest.raises(MalformedMatrixError):
            pivot_product([[0, 0], [1, 0]])

    def test_invariant_factors(self):
        """Test Smith invariants divide each other."""
        assert invariant_factors([[2, 0], [0, 3]]) == (1, 6)
        assert invariant_factors([[2, 4], [6, 8]]) == (2, 4)
        assert invariant_factors([[0, 0], [0, 0]]) == ()

    def test_snf_transforms(self, rng):
        """Test U A V is diagonal."""
        for _ in range(10):
            A = random_int_matrix(rng, 3, 4)
            result = snf(A)
            D = int_matmul(int_matmul(result.U, A), result.V)
            for i, row in enumerate(D):
                for j, x in enumerate(row):
                    expected = result.diag[i] if i == j and i < len(result.diag) else 0
                    assert x == expected
            for a, b in zip(result.diag, result.diag[1:]):
                assert b % a == 0


class TestCycMatrix:
    """Tests for matrices over Q(zeta_n)."""

    def test_arithmetic(self):
        """Test products, powers and Galois action."""
        z = CycNum.zeta(3)
        M = CycMatrix.from_rows([[z, 0], [0, 1]])
        assert M.conductor == 3
        assert M ** 3 == CycMatrix.identity(2, 3)
        assert M.galois(2) @ M == CycMatrix.identity(2, 3)
        assert M.vector_mul([1, 1]) == (z, 1)
        assert not M.is_rational()

    def test_mixed_conductors(self):
        """Test products lift both operands to a common conductor."""
        A = CycMatrix.from_rows([[CycNum.zeta(4)]])
        B = CycMatrix.from_rows([[CycNum.zeta(3)]])
        assert (A @ B).conductor == 12

    def test_denominator(self):
        """Test the common denominator of the entries."""
        M = CycMatrix.from_rows([[Fraction(1, 2), CycNum.from_poly(3, [0, Fraction(1, 3)])]])
        assert M.denominator() == 6
        assert M.scale(6).is_integral()

    def test_solve(self):
        """Test X A = B over Q(zeta_5), rational and not."""
        z = CycNum.zeta(5)
        A = CycMatrix.from_rows([[1, z], [0, 1]])
        X = CycMatrix.from_rows([[z, 2], [1, -z]])
        assert solve_left_cyc(A, X @ A) == X
        R = CycMatrix.from_rows([[1, 1], [0, 1]], 5)
        assert solve_left_cyc(R, X @ R) == X

    def test_split_vector(self):
        """Test power-basis coordinates are concatenated."""
        assert split_vector([CycNum.zeta(3), 2], 3) == [0, 1, 2, 0]

    def test_ragged(self):
        """Test ragged rows are refused."""
        with pytest.raises(MalformedMatrixError):
            CycMatrix.from_rows([[1, 2], [3]])
