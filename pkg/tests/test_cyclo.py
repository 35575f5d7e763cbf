"""
Tests for cyclotomic arithmetic, unit groups and trace reconstruction.
"""

from fractions import Fraction

import pytest
from flint import acb
from rest_framework import serializers

from core.exceptions import CyclotomicError
from cyclo.embedding import embed_complex
from cyclo.numbers import CycNum, GaloisChar, euler_phi, field_arith, galois_apply, ramanujan_sum
from cyclo.serializers import cycnum_from_json, cycnum_to_json
from cyclo.trace import trace_reconstruct, trace_to_Q, trace_vector
from cyclo.units import (
    congruence_units,
    lift_unit,
    multiplicative_order,
    subgroup,
    unit_generators,
    unit_inverse,
    units,
)


def random_cycnum(rng, n):
    return CycNum.from_poly(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)])


class TestCycNum:
    """Tests for elements of Q(zeta_n)."""

    def test_roots_of_unity(self):
        """Test basic relations between roots of unity."""
        assert CycNum.zeta(3) + CycNum.zeta(3, 2) == -1
        assert CycNum.zeta(4) ** 2 == -1
        assert CycNum.zeta(5) ** 5 == 1
        assert CycNum.zeta(7, -1) * CycNum.zeta(7) == 1

    def test_mixed_conductors(self):
        """Test operands of different conductors meet at the lcm."""
        x = CycNum.zeta(3) + CycNum.zeta(4)
        assert x.conductor == 12
        assert CycNum.zeta(3).lift(6) == CycNum.zeta(6, 2)
        assert CycNum.one(3) == CycNum.one(6)
        assert hash(CycNum.one(3)) == hash(CycNum.one(6))

    def test_lift_requires_divisibility(self):
        """Test lifting to a non-multiple conductor raises."""
        with pytest.raises(CyclotomicError):
            CycNum.zeta(3).lift(4)

    def test_galois(self):
        """Test sigma_d permutes the roots of unity."""
        assert CycNum.zeta(5).galois(2) == CycNum.zeta(5, 2)
        assert CycNum.zeta(8).conjugate() == CycNum.zeta(8, 7)
        with pytest.raises(CyclotomicError):
            CycNum.zeta(6).galois(2)

    def test_galois_is_multiplicative(self, rng):
        """Test sigma_d(xy) = sigma_d(x) sigma_d(y)."""
        for _ in range(10):
            x, y = random_cycnum(rng, 9), random_cycnum(rng, 9)
            assert (x * y).galois(4) == x.galois(4) * y.galois(4)

    def test_inverse(self, rng):
        """Test x * x^-1 = 1."""
        for _ in range(10):
            x = random_cycnum(rng, 5)
            if x.is_zero():
                continue
            assert x * x.inverse() == 1
            assert (x / x) == 1
        with pytest.raises(CyclotomicError):
            CycNum.zero(5).inverse()

    def test_trace(self):
        """Test traces of roots of unity are Ramanujan sums."""
        assert CycNum.zeta(5).trace() == -1
        assert CycNum.one(5).trace() == 4
        assert CycNum.zeta(12, 3).trace() == ramanujan_sum(12, 3)
        assert trace_to_Q(Fraction(3, 2)) == Fraction(3, 2)

    def test_integrality(self):
        """Test rational and integral predicates."""
        x = CycNum.from_poly(3, [Fraction(1, 2), 1])
        assert not x.is_integral()
        assert x.denominator() == 2
        assert CycNum.from_rational(7, Fraction(5, 3)).rational_value() == Fraction(5, 3)

    def test_wrong_coefficient_count(self):
        """Test the power basis length is enforced."""
        with pytest.raises(CyclotomicError):
            CycNum(5, (1, 2))

    def test_galois_char(self):
        """Test composition and restriction to subfields."""
        s = GaloisChar(12, 5).compose(GaloisChar(12, 7))
        assert s.exponent == 11
        assert galois_apply(GaloisChar(12, 5), CycNum.zeta(3)) == CycNum.zeta(3, 2)
        assert field_arith(2, CycNum.zeta(4), 'mul') == CycNum.zeta(4) * 2


class TestUnits:
    """Tests for (Z/nZ)^x."""

    def test_units(self):
        """Test unit representatives and Euler phi."""
        assert units(12) == (1, 5, 7, 11)
        assert units(1) == (0,)
        assert euler_phi(12) == 4

    def test_orders_and_inverses(self):
        """Test multiplicative order and inverse."""
        assert multiplicative_order(3, 7) == 6
        assert (unit_inverse(5, 12) * 5) % 12 == 1
        with pytest.raises(CyclotomicError):
            unit_inverse(4, 12)

    def test_generators(self):
        """Test the greedy generating set spans the group."""
        for n in (8, 15, 49, 120):
            assert subgroup(n, unit_generators(n)) == frozenset(units(n))

    def test_congruence_units(self):
        """Test the diamond subgroup of Gamma_0(N) cap Gamma_1(M)."""
        assert congruence_units(9, 3) == frozenset({1, 4, 7})
        assert congruence_units(11, 1) == frozenset(units(11))

    def test_lift_unit(self):
        """Test lifting a residue to a unit modulo a multiple."""
        assert lift_unit(2, 3, 9) == 2
        assert lift_unit(1, 2, 6) == 1
        assert lift_unit(0, 1, 10) == 1


class TestTraces:
    """Tests for the trace pairing."""

    def test_round_trip(self, rng):
        """Test an element is recovered from its traces."""
        for n in (3, 8, 15):
            x = random_cycnum(rng, n)
            assert trace_reconstruct(trace_vector(x), n) == x

    def test_length_checked(self):
        """Test the number of traces must equal phi(n)."""
        with pytest.raises(CyclotomicError):
            trace_reconstruct([1, 2, 3], 5)


class TestEmbeddingAndJson:
    """Tests for complex embeddings and the JSON form."""

    def test_embedding(self):
        """Test zeta_4 embeds as i."""
        assert embed_complex(CycNum.zeta(4), 64).overlaps(acb(0, 1))

    def test_json(self):
        """Test the wire format."""
        assert cycnum_to_json(CycNum.zeta(3)) == {'conductor': 3, 'coeffs': ['0', '1']}
        assert cycnum_to_json(Fraction(1, 2)) == {'conductor': 1, 'coeffs': ['1/2']}
        assert cycnum_from_json({'conductor': 4, 'coeffs': ['0', '-1']}) == -CycNum.zeta(4)

    def test_json_rejects_bad_length(self):
        """Test a coefficient list of the wrong length."""
        with pytest.raises(serializers.ValidationError):
            cycnum_from_json({'conductor': 5, 'coeffs': ['1']})
