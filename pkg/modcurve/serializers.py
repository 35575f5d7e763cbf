"""
JSON forms for modular-curve inputs and results.

Group files: {"modulus": N, "generators": [[a, b, c, d], ...]}.
"""

import json
from pathlib import Path

from rest_framework import serializers

from core.exceptions import FixtureError, GroupValidationError
from core.serializers import RationalField, validated
from modcurve.groups import GroupSpec
from qexp.serializers import qexp_to_json


class GroupSpecSerializer(serializers.Serializer):
    modulus = serializers.IntegerField(min_value=1)
    generators = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), min_length=4, max_length=4),
    )

    def to_representation(self, instance):
        return instance.describe()

    def create(self, validated_data):
        return GroupSpec.from_lists(validated_data['modulus'], validated_data['generators'])


def read_group_file(path) -> GroupSpec:
    """
    Raises:
        FixtureError: the file is missing or not JSON
        GroupValidationError: the document does not describe a group
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise FixtureError(f"group file {path} not found") from e
    except json.JSONDecodeError as e:
        raise FixtureError(f"group file {path} is not valid JSON: {e}") from e
    serializer = GroupSpecSerializer(data=data)
    validated(serializer, GroupValidationError, f"group file {path.name}")
    return serializer.save()


class PolynomialSerializer(serializers.Serializer):
    degree = serializers.IntegerField(source='d')
    polynomial = serializers.CharField(source='format')
    coefficients = serializers.SerializerMethodField()

    def get_coefficients(self, obj):
        field = RationalField()
        return [
            {'monomial': list(m), 'coefficient': field.to_representation(c)}
            for m, c in obj.terms.items()
        ]


class CurveModelSerializer(serializers.Serializer):
    genus = serializers.IntegerField()
    hyperelliptic = serializers.BooleanField()
    variables = serializers.ListField(child=serializers.CharField())
    degrees = serializers.ListField(child=serializers.IntegerField())
    quadrics = serializers.IntegerField()
    cubics_added = serializers.IntegerField(allow_null=True)
    generators = PolynomialSerializer(many=True)


class InvariantBasisSerializer(serializers.Serializer):
    modulus = serializers.IntegerField(source='N')
    width = serializers.IntegerField()
    genus = serializers.IntegerField()
    ambient_dimension = serializers.IntegerField()
    lll = serializers.BooleanField()
    forms = serializers.SerializerMethodField()

    def get_forms(self, obj):
        terms = self.context.get('terms', 2 * max(obj.genus, 1) + 1)
        return [qexp_to_json(f, terms=terms) for f in obj.forms]
