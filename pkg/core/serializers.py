"""
Shared serializer fields and helpers.

Exact rationals travel as "p/q" strings (integers also accepted on input).
"""

from rest_framework import serializers

from core.exceptions import InputError
from core.utils import format_rational, parse_rational


class RationalField(serializers.Field):
    """An exact rational, written as "p/q"."""

    default_error_messages = {
        'invalid': 'Expected an integer or a "p/q" string.',
    }

    def to_representation(self, value):
        return format_rational(value)

    def to_internal_value(self, data):
        try:
            return parse_rational(data)
        except InputError:
            self.fail('invalid')


class RationalVectorField(serializers.Field):
    """A list of rationals; a bare scalar is read as a vector of length one."""

    def to_representation(self, value):
        return [format_rational(v) for v in value]

    def to_internal_value(self, data):
        if not isinstance(data, list):
            data = [data]
        if not data:
            raise serializers.ValidationError("empty coefficient vector")
        try:
            return [parse_rational(v) for v in data]
        except InputError as e:
            raise serializers.ValidationError(str(e)) from e


def validated(serializer: serializers.Serializer, error_class=InputError, what: str = "input"):
    """
    Run ``serializer.is_valid`` and return its validated data.

    Raises:
        error_class: with the serializer errors in the message
    """
    if not serializer.is_valid():
        raise error_class(f"invalid {what}: {dict(serializer.errors)}")
    return serializer.validated_data
