"""
Tests for Z-bases, diamond operators and the Atkin-Lehner matrix.
"""

from dataclasses import replace
from fractions import Fraction

import pytest
from flint import acb, acb_mat

from alcore.basis import ZBasis, build_zbasis, saturate
from alcore.bounds import denominator_bounds, valuation_exponent
from alcore.diamonds import DiamondRep, check_homomorphism, diamond_order_ok
from alcore.pipeline import compute_al_matrix
from alcore.pseudo import exact_pseudo_eigenvalue
from alcore.reconstruct import reconstruct_W
from alcore.serializers import ALMatrixPayloadSerializer, ALMatrixSerializer
from alcore.spaces import CuspSpace
from alcore.verification import verify_W
from core.exceptions import (
    InputError,
    InsufficientPrecisionError,
    MissingFixtureError,
    NonIntegralError,
    NotInSpaceError,
    RankDeficientError,
)
from core.precision import working_precision
from cyclo.embedding import embed_current
from cyclo.numbers import CycNum
from cyclo.units import units
from qexp.series import QExp
from qexp.sturm import SturmBound, dim_cusp_gamma0
from zlinalg.cyclomatrix import CycMatrix
from zlinalg.rational import matmul

# S_2(Gamma_0(49) cap Gamma_1(7)): the HNF basis through q^22 and W_49 / 7
# with entries a xi^2 + b xi + c, xi = zeta_7 + zeta_7^-1.
BASIS_49 = (
    {1: 1, 8: -3, 22: 4},
    {2: 1, 9: -3, 16: -1},
    {4: 1, 11: -4, 18: 3},
)
W_49_ROWS = (
    ((-3, -2, 2), (2, -1, -6), (-1, -3, 3)),
    ((2, -1, -6), (1, 3, -3), (3, 2, -2)),
    ((-1, -3, 3), (3, 2, -2), (2, -1, -6)),
)


def level_49_W():
    z = CycNum.zeta(7)
    xi = z + z ** 6
    rows = [[7 * (a * xi * xi + b * xi + c) for a, b, c in row] for row in W_49_ROWS]
    return CycMatrix.from_rows(rows, 7)


def level_49_diamonds(W):
    """D_d = W^-1 sigma_d(W), with W^-1 = W / 49^2."""
    matrices = {}
    for d in units(7):
        D = (W @ W.galois(d)).scale(Fraction(1, 49 ** 2)).to_rational()
        assert all(x.denominator == 1 for row in D for x in row)
        matrices[d] = tuple(tuple(int(x) for x in row) for row in D)
    return DiamondRep(49, 7, matrices)


@pytest.fixture
def synthetic_49():
    """W_49 rebuilt from its own 256-bit embedding on the level 49 basis."""
    W = level_49_W()
    rep = level_49_diamonds(W)
    forms = tuple(QExp.from_terms(terms, 23, weight=2, level=49) for terms in BASIS_49)
    A = tuple(tuple(f.integer_coeffs(1, 23)) for f in forms)
    basis = ZBasis(CuspSpace.gamma0_gamma1(2, 49, 7), forms, A, 1)
    with working_precision(256):
        numW = acb_mat(3, 3)
        for i in range(3):
            for j in range(3):
                numW[i, j] = embed_current(W[i, j])
        return reconstruct_W(numW, rep, basis)


@pytest.fixture
def al_49_h(store):
    al, _ = compute_al_matrix(CuspSpace.gamma0_gamma1(2, 49, 7), store)
    return al


@pytest.fixture
def al_11(store):
    al, _ = compute_al_matrix(CuspSpace.gamma0(2, 11), store)
    return al


@pytest.fixture
def al_22(store):
    al, _ = compute_al_matrix(CuspSpace.gamma0(2, 22), store)
    return al


class TestSpaces:
    """Tests for the space descriptor."""

    def test_named_groups(self):
        """Test Gamma_0, Gamma_1 and Gamma_0 cap Gamma_1(M)."""
        assert CuspSpace.gamma0(2, 11).H == frozenset(units(11))
        assert CuspSpace.gamma1(2, 11).H == frozenset({1})
        assert CuspSpace.gamma0_gamma1(2, 9, 3).H == frozenset({1, 4, 7})
        assert CuspSpace.from_subgroup(2, 13, [5]).H == frozenset({1, 5, 8, 12})

    def test_invalid_H(self):
        """Test H must be a subgroup of units."""
        with pytest.raises(InputError):
            CuspSpace(2, 5, frozenset({2}))
        with pytest.raises(InputError):
            CuspSpace(2, 6, frozenset({1, 2}))
        with pytest.raises(InputError):
            CuspSpace(0, 5, frozenset({1}))

    def test_describe(self):
        """Test the descriptor document."""
        assert CuspSpace.gamma1(2, 5).describe() == {'weight': 2, 'level': 5, 'H': [1]}


class TestBounds:
    """Tests for the denominator bounds."""

    def test_values(self):
        """Test B and C at a few levels."""
        assert denominator_bounds(2, 49) == (7, 1)
        assert denominator_bounds(3, 12) == (72, 24)
        assert denominator_bounds(2, 22) == (44, 4)
        assert denominator_bounds(2, 1) == (1, 1)
        assert valuation_exponent(2, 2) == 2

    def test_invalid(self):
        """Test nonpositive weight is refused."""
        with pytest.raises(InputError):
            denominator_bounds(0, 11)


class TestSaturation:
    """Tests for saturating a lattice of q-expansions."""

    bound = SturmBound(2, 11, 2)

    def test_divides_out_index(self):
        """Test (q + q^2 + q^3, q - q^2 + q^3) saturates to (q + q^3, q^2)."""
        basis = saturate([QExp((0, 1, 1, 1)), QExp((0, 1, -1, 1))], self.bound)
        assert basis.A == ((1, 0), (0, 1))
        assert basis.alpha == 1
        assert basis.forms[0].integer_coeffs(1, 4) == [1, 0, 1]
        assert basis.forms[1].integer_coeffs(1, 4) == [0, 1, 0]
        half = Fraction(1, 2)
        assert basis.R == ((half, half), (half, -half))

    def test_rank_deficient(self):
        """Test dependent spanning forms are refused."""
        with pytest.raises(RankDeficientError):
            saturate([QExp((0, 1, 1, 0)), QExp((0, 2, 2, 0))], self.bound)

    def test_not_divisible_beyond_bound(self):
        """Test a combination divisible only up to the bound is refused."""
        with pytest.raises(NonIntegralError):
            saturate([QExp((0, 1, 1, 1)), QExp((0, 1, -1, 0))], self.bound)

    def test_too_short(self):
        """Test expansions must extend past the bound."""
        with pytest.raises(InsufficientPrecisionError):
            saturate([QExp((0, 1))], self.bound)

    def test_empty(self):
        """Test the zero space."""
        assert saturate([], self.bound).g == 0

    def test_random_sublattices(self, rng):
        """Test finite-index sublattices of [I | X] saturate back to [I | X]."""
        bound = SturmBound(2, 11, 3)
        checked = 0
        while checked < 25:
            M = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
            det = (
                M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
                - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
                + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
            )
            if det == 0:
                continue
            lattice = [
                [int(i == j) for j in range(3)] + [rng.randint(-9, 9) for _ in range(6)]
                for i in range(3)
            ]
            spanning = [
                QExp((0,) + tuple(sum(M[i][l] * lattice[l][n] for l in range(3)) for n in range(9)))
                for i in range(3)
            ]
            basis = saturate(spanning, bound)
            assert basis.A == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
            assert basis.alpha == 1
            assert [f.integer_coeffs(1, 10) for f in basis.forms] == lattice
            identity = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
            assert matmul(basis.R, M) == identity
            checked += 1


class TestZBasis:
    """Tests for Z-bases built from the bundled fixtures."""

    def test_level_11(self, store):
        """Test the basis of S_2(Gamma_0(11)) is 11a itself."""
        basis = build_zbasis(CuspSpace.gamma0(2, 11), store)
        assert basis.g == 1
        assert basis.alpha == 1
        assert basis.forms[0].integer_coeffs(1, 6) == [1, -2, -1, 2, 1]

    def test_level_22(self, store):
        """Test the HNF basis at level 22 has pivots in the first two columns."""
        basis = build_zbasis(CuspSpace.gamma0(2, 22), store)
        assert basis.g == dim_cusp_gamma0(2, 22)
        assert basis.pivots == (0, 1)
        assert [row[:2] for row in basis.A] == [(1, 0), (0, 1)]

    def test_missing_fixture(self, store):
        """Test a level without fixtures is reported."""
        with pytest.raises(MissingFixtureError):
            build_zbasis(CuspSpace.gamma0(2, 13), store)


class TestALMatrix:
    """Tests for W_N on the bundled levels."""

    def test_level_11(self, store):
        """Test W_11 = -11 on the single newform of level 11."""
        al, report = compute_al_matrix(CuspSpace.gamma0(2, 11), store)
        assert al.W.rows == ((-11,),)
        assert al.Q == 1
        assert report.passed
        assert report.checks['w_squared']

    def test_level_22(self, al_22):
        """Test W_22 mixes the two degeneracies of 11a."""
        assert al_22.W.rows == ((-22, 0), (-11, 22))
        assert (al_22.denom_bound, al_22.c_bound) == (44, 4)

    def test_level_1(self, store):
        """Test the empty space at level 1."""
        al, report = compute_al_matrix(CuspSpace.gamma0(2, 1), store)
        assert al.g == 0
        assert al.W.rows == ()
        assert report.passed

    def test_diamonds_trivial_on_gamma0(self, al_22):
        """Test D_1 is the identity and Q = 1 for Gamma_0."""
        assert al_22.diamonds.Q == 1
        assert al_22.diamonds.as_lists(1) == [[1, 0], [0, 1]]

    def test_verification_catches_wrong_W(self, al_11):
        """Test a scaled W fails W^2 = N^k."""
        report = verify_W(replace(al_11, W=al_11.W.scale(2)))
        assert not report.passed
        assert 'w_squared' in report.failures
        assert report.to_dict()['passed'] is False

    def test_level_49(self, store):
        """Test the CM form of level 49 has W_49 = -49."""
        al, report = compute_al_matrix(CuspSpace.gamma0(2, 49), store)
        assert al.W.rows == ((-49,),)
        assert al.Q == 1
        assert report.passed

    @pytest.mark.requires_fixtures
    def test_level_169(self, store, require_fixtures):
        """Test W_169 on S_2(Gamma_0(169)) passes every exact check."""
        require_fixtures((1, 2), (13, 2), (169, 2))
        al, report = compute_al_matrix(CuspSpace.gamma0(2, 169), store)
        assert al.g == dim_cusp_gamma0(2, 169)
        assert report.passed


class TestLevel49WithCharacter:
    """Tests for W_49 on S_2(Gamma_0(49) cap Gamma_1(7)), where Q = 7."""

    def test_synthetic_round_trip(self, synthetic_49):
        """Test W with D_d = W sigma_d(W) / 49^2 is recovered exactly from 256-bit balls."""
        assert synthetic_49.W == level_49_W()
        assert synthetic_49.Q == 7
        assert len(synthetic_49.betas) == 6
        report = verify_W(synthetic_49)
        assert report.passed, report.details

    def test_synthetic_diamonds(self, synthetic_49):
        """Test the diamonds derived from W form a representation of (Z/7Z)^x."""
        rep = synthetic_49.diamonds
        check_homomorphism(rep)
        assert diamond_order_ok(rep, 3, 6)
        assert rep.as_lists(6) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_basis(self, store):
        """Test the HNF basis is q - 3q^8 + 4q^22, q^2 - 3q^9 - q^16, q^4 - 4q^11 + 3q^18."""
        basis = build_zbasis(CuspSpace.gamma0_gamma1(2, 49, 7), store)
        assert basis.g == 3
        assert basis.alpha == 1
        assert basis.pivots == (0, 1, 3)
        for form, terms in zip(basis.forms, BASIS_49):
            expected = [terms.get(n, 0) for n in range(1, 23)]
            assert form.integer_coeffs(1, 23) == expected

    def test_W(self, al_49_h):
        """Test the pipeline reproduces W_49 over Q(zeta_7) and its diamonds."""
        W = level_49_W()
        assert al_49_h.Q == 7
        assert al_49_h.W == W
        expected = level_49_diamonds(W)
        for d in units(7):
            assert al_49_h.diamonds.as_lists(d) == expected.as_lists(d)
        assert verify_W(al_49_h).passed

    def test_cm_form_eigenvector(self, al_49_h):
        """Test 49a = f_1 + f_2 - f_3 is an eigenvector of W_49 with eigenvalue -49."""
        assert al_49_h.W.vector_mul((1, 1, -1)) == (-49, -49, 49)

    def test_pseudo_eigenvalues(self, al_49_h, store):
        """Test c = -49 for 49a and |c|^2 = 49^2 holds for its twist."""
        records = {rec.label: rec for rec in store.load(49, 2)}
        c = exact_pseudo_eigenvalue(al_49_h, records['49.2.a.a'])
        assert c.as_cycnum() == -49
        twisted = exact_pseudo_eigenvalue(al_49_h, records['49.2.c.a'])
        assert twisted.N == 49

    def test_galois_fault_is_caught(self, synthetic_49):
        """Test adding 7 zeta_7 to one entry breaks sigma_d(W) = W D_d."""
        rows = [list(row) for row in synthetic_49.W.rows]
        rows[0][1] = rows[0][1] + 7 * CycNum.zeta(7)
        report = verify_W(replace(synthetic_49, W=CycMatrix.from_rows(rows, 7)))
        assert report.checks['galois'] is False
        assert 'galois' in report.failures
        assert report.checks['denominator']


class TestPseudoEigenvalues:
    """Tests for exact pseudo-eigenvalues read off W."""

    def test_level_11(self, al_11, store):
        """Test c = -11 and lambda = -1 for 11a."""
        (rec,) = store.load(11, 2)
        c = exact_pseudo_eigenvalue(al_11, rec)
        assert c.as_cycnum() == -11
        with working_precision(64):
            assert c.pseudo_eigenvalue(acb(0)).overlaps(acb(-1))

    def test_old_form_refused(self, al_22, store):
        """Test a newform of lower level has no pseudo-eigenvalue at N."""
        (rec,) = store.load(11, 2)
        with pytest.raises(NotInSpaceError):
            exact_pseudo_eigenvalue(al_22, rec)


class TestSerialization:
    """Tests for the Atkin-Lehner document."""

    def test_document(self, al_22):
        """Test the rendered fields."""
        data = ALMatrixSerializer(al_22).data
        assert data['dimension'] == 2
        assert data['conductor'] == 1
        assert (data['B'], data['C']) == (44, 4)
        assert data['space'] == {'weight': 2, 'level': 22, 'H': sorted(units(22))}
        assert data['diamonds'] == {'0': [[1, 0], [0, 1]]}

    def test_reload_verifies(self, al_22):
        """Test a reloaded document passes verification again."""
        payload = ALMatrixPayloadSerializer(data=ALMatrixSerializer(al_22).data)
        assert payload.is_valid(), payload.errors
        al = payload.save()
        assert al.W == al_22.W
        assert verify_W(al).passed

    def test_size_mismatch(self, al_22):
        """Test a W with a missing row is rejected."""
        data = dict(ALMatrixSerializer(al_22).data)
        data['W'] = data['W'][:1]
        assert not ALMatrixPayloadSerializer(data=data).is_valid()
