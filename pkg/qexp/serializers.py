"""
Serializers for q-expansions.

Wire format: {"width", "weight", "level", "conductor", "coeffs"}; a
coefficient is a "p/q" string, or a cyclotomic number object when the
conductor exceeds 1.
"""

from rest_framework import serializers

from core.exceptions import InputError
from core.utils import format_rational, parse_rational
from cyclo.numbers import CycNum
from cyclo.serializers import cycnum_from_json, cycnum_to_json
from qexp.series import QExp, Ring


class CoefficientField(serializers.Field):
    """A rational ("p/q") or cyclotomic coefficient."""

    def to_representation(self, value):
        if isinstance(value, CycNum):
            return cycnum_to_json(value)
        return format_rational(value)

    def to_internal_value(self, data):
        if isinstance(data, dict):
            return cycnum_from_json(data)
        try:
            return parse_rational(data)
        except InputError as e:
            raise serializers.ValidationError(str(e)) from e


class QExpSerializer(serializers.Serializer):
    width = serializers.IntegerField(min_value=1)
    weight = serializers.IntegerField(min_value=0)
    level = serializers.IntegerField(min_value=1)
    conductor = serializers.IntegerField(min_value=1, read_only=True)
    coeffs = serializers.ListField(child=CoefficientField())

    def create(self, validated_data):
        return QExp(
            tuple(validated_data['coeffs']),
            width=validated_data['width'],
            weight=validated_data['weight'],
            level=validated_data['level'],
        )


def qexp_to_json(f: QExp, terms: int = None) -> dict:
    if f.ring == Ring.FIELD:
        raise InputError("number-field expansions are serialized through their traces")
    if terms is not None:
        f = f.truncate(min(terms, f.prec))
    return dict(QExpSerializer(f).data)


def qexp_from_json(data: dict) -> QExp:
    serializer = QExpSerializer(data=data)
    if not serializer.is_valid():
        raise InputError(f"invalid q-expansion: {serializer.errors}")
    return serializer.save()
