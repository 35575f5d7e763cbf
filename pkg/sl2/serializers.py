"""
JSON form of action tables and GL2(Z/NZ) matrices.

Matrices travel as four integers [a, b, c, d] modulo N.
"""

from rest_framework import serializers

from core.exceptions import CuspformsError
from cyclo.serializers import CycNumField
from qexp.serializers import QExpSerializer, qexp_to_json
from sl2.elements import GL2Element
from sl2.table import ActionTable
from zlinalg.cyclomatrix import CycMatrix


class GL2ElementField(serializers.Field):
    """[a, b, c, d]; the modulus comes from the ``modulus`` context key."""

    default_error_messages = {
        'invalid': 'Expected four integers [a, b, c, d].',
    }

    def to_representation(self, value):
        return list(value.entries)

    def to_internal_value(self, data):
        if not isinstance(data, list) or len(data) != 4:
            self.fail('invalid')
        if any(not isinstance(x, int) or isinstance(x, bool) for x in data):
            self.fail('invalid')
        modulus = self.context.get('modulus')
        if modulus is None:
            return tuple(data)
        try:
            return GL2Element.from_entries(data, modulus)
        except CuspformsError as e:
            raise serializers.ValidationError(str(e)) from e


class ActionTableSerializer(serializers.Serializer):
    level = serializers.IntegerField(source='N')
    weight = serializers.IntegerField(source='k')
    dimension = serializers.IntegerField(source='g')
    conductor = serializers.IntegerField()
    A = serializers.SerializerMethodField()
    basis = serializers.SerializerMethodField()
    S = serializers.SerializerMethodField()
    S_display = serializers.SerializerMethodField()
    report = serializers.DictField(child=serializers.BooleanField())

    def get_A(self, obj):
        return [list(row) for row in obj.A]

    def get_basis(self, obj):
        terms = (len(obj.A[0]) if obj.A else 0) + 1
        return [qexp_to_json(h, terms=terms) for h in obj.basis]

    def get_S(self, obj):
        field = CycNumField()
        return [[field.to_representation(x) for x in row] for row in obj.S_matrix.rows]

    def get_S_display(self, obj):
        return obj.S_matrix.format("z")


class ActionTablePayloadSerializer(serializers.Serializer):
    """Validates an ``ActionTableSerializer`` document; ``save()`` returns an ``ActionTable``."""

    level = serializers.IntegerField(min_value=1)
    weight = serializers.IntegerField(min_value=1)
    A = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    basis = serializers.ListField(child=serializers.DictField())
    S = serializers.ListField(child=serializers.ListField(child=CycNumField()))
    report = serializers.DictField(child=serializers.BooleanField(), required=False)

    def validate_basis(self, value):
        forms = []
        for item in value:
            serializer = QExpSerializer(data=item)
            if not serializer.is_valid():
                raise serializers.ValidationError(serializer.errors)
            forms.append(serializer.save())
        return forms

    def validate(self, attrs):
        g = len(attrs['basis'])
        if len(attrs['A']) != g or len(attrs['S']) != g:
            raise serializers.ValidationError("basis, A and S sizes disagree")
        if any(f.width != attrs['level'] for f in attrs['basis']):
            raise serializers.ValidationError("basis expansions must be in q_N")
        return attrs

    def create(self, validated_data):
        N = validated_data['level']
        try:
            table = ActionTable(
                N,
                validated_data['weight'],
                tuple(validated_data['basis']),
                tuple(tuple(row) for row in validated_data['A']),
                CycMatrix.from_rows(validated_data['S'], N),
            )
        except CuspformsError as e:
            raise serializers.ValidationError(str(e)) from e
        table.report.update(validated_data.get('report', {}))
        return table
