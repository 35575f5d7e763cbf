"""
Tests for truncated q-expansions, Sturm bounds and coefficient fields.
"""

from fractions import Fraction

import pytest
from flint import acb

from core.exceptions import (
    InputError,
    InsufficientPrecisionError,
    MalformedMatrixError,
    NewformDataError,
    NonIntegralError,
)
from cyclo.numbers import CycNum, GaloisChar
from qexp.numberfield import NumberField
from qexp.serializers import qexp_from_json, qexp_to_json
from qexp.series import QExp, Ring, coefficient_matrix, eval_monomial
from qexp.sturm import dim_cusp_gamma0, dim_cusp_gamma1, gamma0_index, gamma1_index, sturm_bound


def series(terms, prec, **meta):
    return QExp.from_terms(terms, prec, **meta)


class TestSeries:
    """Tests for QExp arithmetic and precision tracking."""

    def test_inspection(self):
        """Test valuation, ring and coefficient access."""
        f = series({2: 3, 4: Fraction(1, 2)}, 6)
        assert f.prec == 6
        assert f.valuation() == 2
        assert f.ring == Ring.Q
        assert f.is_cusp_form()
        assert series({}, 4).valuation() is None
        with pytest.raises(InsufficientPrecisionError):
            f[6]

    def test_product_precision(self):
        """Test a product is valid to min(prec_f + v_g, prec_g + v_f)."""
        f = series({1: 1}, 5)
        g = series({2: 1}, 4)
        h = f.mul(g)
        assert h.prec == 5
        assert h == series({3: 1}, 5)
        assert (f * g).weight == f.weight + g.weight

    def test_sum_takes_shorter_precision(self):
        """Test addition truncates to the shorter operand."""
        f = series({1: 1}, 5) + series({1: 1, 2: 1}, 3)
        assert f == series({1: 2, 2: 1}, 3)
        with pytest.raises(MalformedMatrixError):
            series({1: 1}, 3, width=2) + series({1: 1}, 3)

    def test_truncate(self):
        """Test truncation never extends."""
        f = series({1: 1}, 5)
        assert f.truncate(2).prec == 2
        with pytest.raises(InsufficientPrecisionError):
            f.truncate(6)

    def test_degeneracy(self):
        """Test alpha_d moves a_n to index d n."""
        f = QExp((0, 1, 2), level=11)
        g = f.degeneracy(2)
        assert g.coeffs == (0, 0, 1, 0, 2, 0)
        assert g.level == 22

    def test_rescale_width(self):
        """Test a series in q_2 supported on even exponents is a series in q."""
        f = QExp((0, 0, 1, 0, 2, 0), width=2)
        assert f.rescale_width(1) == QExp((0, 1, 2))
        with pytest.raises(MalformedMatrixError):
            QExp((0, 1, 0), width=2).rescale_width(1)

    def test_twists(self):
        """Test T twists by zeta_w^n and sigma_d acts coefficientwise."""
        zeta = CycNum.zeta(3)
        f = QExp((0, 1, 1), width=3)
        assert f.t_twist(1) == QExp((0, zeta, zeta ** 2), width=3)
        assert f.t_twist(3) == f
        g = QExp((0, zeta))
        assert g.galois_twist(GaloisChar(3, 2)) == QExp((0, zeta ** 2))
        assert g.ring == Ring.Z_ZETA

    def test_cyclotomic_product(self):
        """Test products of cyclotomic series."""
        zeta = CycNum.zeta(4)
        f = QExp((0, zeta, 1))
        assert f.mul(f) == QExp((0, 0, -1, 2 * zeta))

    def test_integer_coefficients(self):
        """Test integer extraction refuses rationals."""
        f = series({1: 1, 2: 2}, 4)
        assert coefficient_matrix([f], 1, 3) == [[1, 2]]
        with pytest.raises(NonIntegralError):
            series({1: Fraction(1, 2)}, 3).integer_coeffs()
        with pytest.raises(InsufficientPrecisionError):
            f.integer_coeffs(0, 5)

    def test_format(self):
        """Test the display string."""
        assert series({1: 1, 2: -2}, 4).format() == "q + -2*q^2 + O(q^4)"
        assert series({}, 3).format() == "0 + O(q^3)"


class TestMonomials:
    """Tests for monomial evaluation."""

    def test_precision(self):
        """Test x^2 y on (q, q^2) is q^4 known to 12 terms."""
        forms = [series({1: 1}, 10), series({2: 1}, 10)]
        m = eval_monomial((2, 1), forms, prec=12)
        assert m == series({4: 1}, 12)
        with pytest.raises(InsufficientPrecisionError):
            eval_monomial((2, 1), forms, prec=13)

    def test_constant_monomial(self):
        """Test the empty monomial is 1."""
        forms = [series({1: 1}, 6), series({2: 1}, 4)]
        assert eval_monomial((0, 0), forms) == QExp.one(4)

    def test_mismatch(self):
        """Test exponent and form counts must agree."""
        with pytest.raises(MalformedMatrixError):
            eval_monomial((1,), [series({1: 1}, 4), series({2: 1}, 4)])


class TestSturm:
    """Tests for indices, Sturm bounds and dimensions."""

    def test_indices(self):
        """Test subgroup indices."""
        assert gamma0_index(11) == 12
        assert gamma1_index(11) == 120
        assert gamma1_index(2) == 6
        assert gamma1_index(1) == 1

    def test_sturm_bound(self):
        """Test the bound at weight 2, level 11."""
        assert sturm_bound(2, 11).s == 20
        with pytest.raises(InputError):
            sturm_bound(0, 11)

    def test_dimensions(self):
        """Test known cusp-form dimensions."""
        assert dim_cusp_gamma0(2, 1) == 0
        assert dim_cusp_gamma0(2, 11) == 1
        assert dim_cusp_gamma0(2, 22) == 2
        assert dim_cusp_gamma0(12, 1) == 1
        assert dim_cusp_gamma1(2, 13) == 2


class TestNumberField:
    """Tests for Q[a]/(a^2 - 5)."""

    @pytest.fixture
    def field(self):
        return NumberField((-5, 0, 1))

    def test_arithmetic(self, field):
        """Test products reduce modulo the defining polynomial."""
        a = field.generator()
        assert a * a == 5
        assert a.inverse() == field.element([0, Fraction(1, 5)])
        assert (1 + a) * (1 - a) == -4
        assert a ** -2 == Fraction(1, 5)

    def test_traces(self, field):
        """Test Tr(1) = 2 and Tr(a) = 0."""
        assert field.power_traces() == (2, 0)
        assert field.element([3, 7]).trace() == 6
        f = QExp((0, field.generator(), field.one()))
        assert f.ring == Ring.FIELD
        assert f.trace_down() == QExp((0, 0, 2))

    def test_embeddings(self, field):
        """Test the complex roots square to 5."""
        roots = field.roots()
        assert len(roots) == 2
        for r in roots:
            assert (field.generator().embed(r) ** 2).overlaps(acb(5))

    def test_invalid_polynomials(self):
        """Test non-monic and reducible polynomials."""
        with pytest.raises(NewformDataError):
            NumberField((1, 0, 2))
        reducible = NumberField((-1, 0, 1))
        with pytest.raises(NewformDataError):
            (reducible.generator() - 1).inverse()


class TestSerialization:
    """Tests for the q-expansion document."""

    def test_rational_document(self):
        """Test a rational expansion reloads."""
        f = series({1: 1, 2: Fraction(-1, 2)}, 4, width=1, weight=2, level=11)
        data = qexp_to_json(f)
        assert data['coeffs'] == ['0', '1', '-1/2', '0']
        assert qexp_from_json(data) == f

    def test_number_field_refused(self):
        """Test number-field expansions are not serialized directly."""
        field = NumberField((-5, 0, 1))
        with pytest.raises(InputError):
            qexp_to_json(QExp((0, field.generator())))

    def test_invalid_document(self):
        """Test a malformed coefficient is an input error."""
        with pytest.raises(InputError):
            qexp_from_json({'width': 1, 'weight': 2, 'level': 1, 'coeffs': ['x']})
