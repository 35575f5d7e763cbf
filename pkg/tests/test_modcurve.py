"""
Tests for modular-curve groups, invariant forms and canonical models.
"""

from fractions import Fraction

import pytest
import sympy

from core.exceptions import (
    FixtureError,
    GroupValidationError,
    InputError,
    InsufficientPrecisionError,
    ModelInconsistencyError,
)
from modcurve.canonical import CurveModel, canonical_cubics, model_select, verify_model
from modcurve.groups import GroupSpec, closure, full_group, validate_group
from modcurve.ideals import HomogeneousPolynomial, compute_Id, monomials, required_terms
from modcurve.invariants import InvariantBasis, invariant_subspace, saturate_subspace
from modcurve.serializers import CurveModelSerializer, InvariantBasisSerializer, read_group_file
from qexp.series import QExp
from sl2.elements import GL2Element
from sl2.table import build_action_table


def series(terms, prec):
    return QExp.from_terms(terms, prec)


def synthetic_basis(forms):
    return InvariantBasis(1, 1, tuple(forms), (), len(forms))


def _convolve(a, b, prec):
    out = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x:
            for j, y in enumerate(b[:prec - i]):
                out[i + j] += x * y
    return out


def klein_forms(prec=40):
    """
    (q, q^2, q u) with u = q^3 - q u^3, a branch of x^3 z - x y^3 + y z^3 = 0.
    """
    u = [0] * prec
    for _ in range(prec):
        cube = _convolve(_convolve(u, u, prec), u, prec)
        nxt = [0] * prec
        nxt[3] = 1
        for n in range(prec - 1):
            nxt[n + 1] -= cube[n]
        u = nxt
    z = [0] + u[:prec - 1]
    return [series({1: 1}, prec), series({2: 1}, prec), QExp(tuple(z))]


class TestGroups:
    """Tests for group validation."""

    def test_x7_split_cartan_diagonal(self, groups_dir):
        """Test the diagonal group modulo 7 with -I."""
        group = validate_group(read_group_file(groups_dir / 'x7.json'))
        assert group.validated
        assert group.order == 12
        assert group.w == 7
        assert group.H == frozenset(range(1, 7))
        assert group.contains(GL2Element.from_entries((-1, 0, 0, -1), 7))

    def test_level13_group(self, groups_dir):
        """Test the level 13 group validates and contains -I."""
        group = validate_group(read_group_file(groups_dir / 'level13_s4.json'))
        assert group.contains(GL2Element.from_entries((-1, 0, 0, -1), 13))
        assert 1 <= group.w <= 13
        assert group.order % 12 == 0

    def test_missing_minus_identity(self, groups_dir):
        """Test a group without -I is refused."""
        with pytest.raises(GroupValidationError):
            validate_group(read_group_file(groups_dir / 'no_minus_one.json'))

    def test_determinant_not_surjective(self):
        """Test det(G) must be all of (Z/NZ)^x."""
        group = GroupSpec.from_lists(7, [[1, 1, 0, 1], [-1, 0, 0, -1]])
        with pytest.raises(GroupValidationError):
            validate_group(group)

    def test_malformed_generator(self):
        """Test short or singular generators are refused."""
        with pytest.raises(GroupValidationError):
            GroupSpec.from_lists(7, [[1, 2, 3]])
        with pytest.raises(GroupValidationError):
            GroupSpec.from_lists(7, [[1, 1, 1, 1]])

    def test_closure_guard(self, groups_dir):
        """Test closure refuses groups above the size limit."""
        group = read_group_file(groups_dir / 'x7.json')
        assert len(closure(7, group.generators)) == 12
        with pytest.raises(GroupValidationError):
            closure(7, group.generators, max_elements=5)

    def test_full_group(self):
        """Test GL2(Z/3Z) has 48 elements and width 1."""
        group = validate_group(full_group(3))
        assert group.order == 48
        assert group.w == 1
        assert group.H == frozenset({1, 2})

    def test_unvalidated_membership(self, groups_dir):
        """Test membership needs validation first."""
        group = read_group_file(groups_dir / 'x7.json')
        with pytest.raises(GroupValidationError):
            group.contains(GL2Element.identity(7))

    def test_missing_group_file(self, tmp_path):
        """Test a missing group file is a fixture error."""
        with pytest.raises(FixtureError):
            read_group_file(tmp_path / 'nope.json')

    def test_invalid_group_document(self, tmp_path):
        """Test a document without generators is refused."""
        path = tmp_path / 'bad.json'
        path.write_text('{"modulus": 7}')
        with pytest.raises(GroupValidationError):
            read_group_file(path)


class TestInvariants:
    """Tests for G-invariant subspaces of synthetic tables."""

    def borel(self):
        return GroupSpec.from_lists(3, [[1, 1, 0, 1], [1, 0, 0, 2], [-1, 0, 0, -1]])

    def test_borel_invariants(self, tetrahedral_table):
        """Test the Borel subgroup fixes exactly the rational multiples of h_3."""
        basis = invariant_subspace(tetrahedral_table, self.borel())
        assert basis.genus == 1
        assert basis.width == 1
        assert basis.ambient_dimension == 6
        assert basis.forms[0].coeffs == (0, 1)
        assert basis.coordinates[0] == (0, 0, 1)

    def test_lll_basis(self, tetrahedral_table):
        """Test LLL reduction keeps the invariant space."""
        basis = invariant_subspace(tetrahedral_table, self.borel(), lll=True)
        assert basis.lll
        assert basis.genus == 1
        assert abs(basis.forms[0].coeffs[1].rational_value()) == 1

    def test_full_group_has_no_invariants(self, tetrahedral_table):
        """Test an irreducible representation has no GL2-fixed vectors."""
        basis = invariant_subspace(tetrahedral_table, full_group(3))
        assert basis.genus == 0
        with pytest.raises(InputError):
            model_select(basis)

    def test_level_mismatch(self, tetrahedral_table, groups_dir):
        """Test a group modulo 7 is refused on a level 3 table."""
        with pytest.raises(InputError):
            invariant_subspace(tetrahedral_table, read_group_file(groups_dir / 'x7.json'))

    def test_saturation(self):
        """Test saturation recovers the lattice points of a rational span."""
        lattice = saturate_subspace([[Fraction(1, 2), Fraction(1, 2), 0], [0, 0, Fraction(2)]])
        assert len(lattice) == 2
        assert all(row[0] == row[1] for row in lattice)
        (a, _, b), (c, _, d) = lattice
        assert abs(a * d - b * c) == 1

    def test_serializer(self, tetrahedral_table):
        """Test the basis document lists one form per dimension."""
        basis = invariant_subspace(tetrahedral_table, self.borel())
        data = InvariantBasisSerializer(basis, context={'terms': 2}).data
        assert data['genus'] == 1
        assert data['modulus'] == 3
        assert len(data['forms']) == 1


class TestIdeals:
    """Tests for canonical ideals in a fixed degree."""

    def test_monomial_order(self):
        """Test monomials are graded lexicographic."""
        assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
        assert len(monomials(4, 3)) == 20

    def test_required_terms(self):
        """Test the series length that decides membership."""
        assert required_terms(3, 4) == 21
        assert required_terms(5, 2) == 19

    def test_conic(self):
        """Test q, q^2, q^3 satisfy exactly xz - y^2 in degree 2."""
        basis = synthetic_basis([series({1: 1}, 30), series({2: 1}, 30), series({3: 1}, 30)])
        quadrics = compute_Id(basis, 2)
        assert len(quadrics) == 1
        x, y, z = sympy.symbols('x y z')
        expr = quadrics[0].primitive().to_sympy().as_expr()
        assert sympy.expand(expr - (x * z - y ** 2)) == 0

    def test_insufficient_precision(self):
        """Test too short expansions are refused."""
        basis = synthetic_basis([series({1: 1}, 5), series({2: 1}, 5), series({3: 1}, 5)])
        with pytest.raises(InsufficientPrecisionError):
            compute_Id(basis, 2)

    def test_polynomial_helpers(self):
        """Test primitive scaling and multiplication by a variable."""
        F = HomogeneousPolynomial(2, 1, (Fraction(-2, 3), Fraction(4, 3)))
        assert F.primitive().coeffs == (1, -2)
        G = F.primitive().times_variable(1)
        assert G.terms == {(1, 1): 1, (0, 2): -2}
        with pytest.raises(InputError):
            HomogeneousPolynomial(2, 1, (1,))


class TestCanonicalModels:
    """Tests for model selection on synthetic invariant bases."""

    def test_klein_quartic(self):
        """Test a genus 3 non-hyperelliptic basis gives a plane quartic."""
        basis = synthetic_basis(klein_forms())
        assert compute_Id(basis, 2) == []
        model = model_select(basis)
        assert model.genus == 3
        assert not model.hyperelliptic
        assert model.degrees == (4,)
        x, y, z = sympy.symbols('x y z')
        F = model.generators[0].to_sympy().as_expr()
        assert sympy.expand(F - (x ** 3 * z - x * y ** 3 + y * z ** 3)) == 0

    def test_hyperelliptic_genus_three(self):
        """Test a rational normal conic is flagged hyperelliptic."""
        basis = synthetic_basis([series({1: 1}, 30), series({2: 1}, 30), series({3: 1}, 30)])
        model = model_select(basis)
        assert model.hyperelliptic
        assert model.quadrics == 1
        assert model.degrees == (2,)

    def test_hyperelliptic_genus_four(self):
        """Test the twisted cubic needs three quadrics."""
        basis = synthetic_basis([series({n: 1}, 40) for n in (1, 2, 3, 4)])
        model = model_select(basis)
        assert model.hyperelliptic
        assert model.degrees == (2, 2, 2)
        assert verify_model(model, basis)

    def test_genus_two(self):
        """Test genus 2 is hyperelliptic with an empty ideal."""
        basis = synthetic_basis([series({1: 1}, 20), series({2: 1}, 20)])
        assert model_select(basis) == CurveModel(2, True, ())

    def test_genus_one_refused(self):
        """Test canonical models need g >= 2."""
        with pytest.raises(InputError):
            model_select(synthetic_basis([series({1: 1}, 20)]))

    def test_inconsistent_quadric_count(self):
        """Test a degenerate basis fits neither quadric count."""
        basis = synthetic_basis([series({1: 1}, 30), series({1: 1}, 30), series({2: 1}, 30)])
        with pytest.raises(ModelInconsistencyError):
            model_select(basis)

    def test_verify_rejects_nonvanishing(self):
        """Test a polynomial that does not vanish is caught."""
        basis = synthetic_basis([series({1: 1}, 30), series({2: 1}, 30), series({3: 1}, 30)])
        wrong = HomogeneousPolynomial(3, 2, (1, 0, 0, 0, 0, 0))
        with pytest.raises(ModelInconsistencyError):
            verify_model(CurveModel(3, True, (wrong,)), basis)

    def test_cubic_count(self):
        """Test dim I_3 of a canonical curve."""
        assert canonical_cubics(4) == 5
        assert canonical_cubics(5) == 15

    def test_serializer(self):
        """Test the model document."""
        basis = synthetic_basis(klein_forms())
        data = CurveModelSerializer(model_select(basis)).data
        assert data['genus'] == 3
        assert data['variables'] == ['x', 'y', 'z']
        assert data['degrees'] == [4]
        assert len(data['generators'][0]['coefficients']) == 3


class TestModelsFromFixtures:
    """Tests for canonical models computed from the bundled newforms."""

    def test_x7_klein_quartic(self, store, groups_dir):
        """Test the diagonal group modulo 7 gives the Klein quartic."""
        table = build_action_table(7, 2, store)
        group = validate_group(read_group_file(groups_dir / 'x7.json'))
        basis = invariant_subspace(table, group)
        assert basis.genus == 3
        assert basis.width == 7
        model = model_select(basis)
        assert not model.hyperelliptic
        assert model.degrees == (4,)
        assert verify_model(model, basis)
        x, y, z = sympy.symbols('x y z')
        F = model.generators[0].to_sympy().as_expr()
        klein = x ** 3 * z - x * y ** 3 + y * z ** 3
        assert sympy.expand(F - klein) == 0 or sympy.expand(F + klein) == 0

    @pytest.mark.requires_fixtures
    def test_level13_s4_quartic(self, store, groups_dir, require_fixtures):
        """Test the exceptional S4 group modulo 13 gives a plane quartic."""
        require_fixtures((1, 2), (13, 2), (169, 2))
        table = build_action_table(13, 2, store)
        group = validate_group(read_group_file(groups_dir / 'level13_s4.json'))
        basis = invariant_subspace(table, group, lll=True)
        assert basis.genus == 3
        model = model_select(basis)
        assert not model.hyperelliptic
        assert model.degrees == (4,)
        assert verify_model(model, basis)
