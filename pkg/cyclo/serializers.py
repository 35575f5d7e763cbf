"""
Serializer fields for cyclotomic numbers.

Wire format: {"conductor": n, "coeffs": ["p/q", ...]} with phi(n) entries.
"""

from rest_framework import serializers

from core.exceptions import CuspformsError
from core.utils import format_rational, parse_rational
from cyclo.numbers import CycNum, euler_phi


def cycnum_to_json(value) -> dict:
    if not isinstance(value, CycNum):
        value = CycNum.from_rational(1, value)
    return {
        'conductor': value.conductor,
        'coeffs': [format_rational(c) for c in value.coeffs],
    }


def cycnum_from_json(data) -> CycNum:
    if not isinstance(data, dict) or set(data) != {'conductor', 'coeffs'}:
        raise serializers.ValidationError("expected an object with 'conductor' and 'coeffs'")
    conductor = data['conductor']
    if not isinstance(conductor, int) or isinstance(conductor, bool) or conductor < 1:
        raise serializers.ValidationError(f"invalid conductor {conductor!r}")
    coeffs = data['coeffs']
    if not isinstance(coeffs, list) or len(coeffs) != euler_phi(conductor):
        raise serializers.ValidationError(
            f"conductor {conductor} needs {euler_phi(conductor)} coefficients"
        )
    try:
        return CycNum(conductor, tuple(parse_rational(c) for c in coeffs))
    except CuspformsError as e:
        raise serializers.ValidationError(str(e)) from e


class CycNumField(serializers.Field):
    """DRF field holding a ``CycNum``."""

    default_error_messages = {
        'invalid': 'Invalid cyclotomic number.',
    }

    def to_representation(self, value):
        return cycnum_to_json(value)

    def to_internal_value(self, data):
        return cycnum_from_json(data)
