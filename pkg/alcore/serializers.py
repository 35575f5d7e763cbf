"""
JSON form of Atkin-Lehner results.

``ALMatrixSerializer`` renders an ``ALMatrix``; ``ALMatrixPayloadSerializer``
validates the same document and rebuilds the matrix (without eigenblock
data) so a cached result can be verified again.
"""

from rest_framework import serializers

from alcore.basis import ZBasis
from alcore.diamonds import DiamondRep
from alcore.reconstruct import ALMatrix
from alcore.spaces import CuspSpace
from core.exceptions import CuspformsError
from core.serializers import RationalField
from cyclo.serializers import CycNumField
from cyclo.units import units
from qexp.serializers import QExpSerializer, qexp_to_json
from zlinalg.cyclomatrix import CycMatrix


class CuspSpaceSerializer(serializers.Serializer):
    weight = serializers.IntegerField(source='k', min_value=1)
    level = serializers.IntegerField(source='N', min_value=1)
    H = serializers.ListField(child=serializers.IntegerField(min_value=0))

    def to_representation(self, instance):
        return instance.describe()

    def create(self, validated_data):
        return CuspSpace(validated_data['k'], validated_data['N'], frozenset(validated_data['H']))


class ALMatrixSerializer(serializers.Serializer):
    space = serializers.SerializerMethodField()
    dimension = serializers.IntegerField(source='g')
    conductor = serializers.IntegerField(source='Q')
    alpha = serializers.IntegerField(source='basis.alpha')
    B = serializers.IntegerField(source='denom_bound')
    C = serializers.IntegerField(source='c_bound')
    A = serializers.SerializerMethodField()
    basis = serializers.SerializerMethodField()
    W = serializers.SerializerMethodField()
    W_display = serializers.SerializerMethodField()
    betas = serializers.SerializerMethodField()
    diamonds = serializers.SerializerMethodField()

    def get_space(self, obj):
        return obj.basis.space.describe()

    def get_A(self, obj):
        return [list(row) for row in obj.basis.A]

    def get_basis(self, obj):
        terms = obj.basis.n + 1
        return [qexp_to_json(f, terms=terms) for f in obj.basis.forms]

    def get_W(self, obj):
        field = CycNumField()
        return [[field.to_representation(x) for x in row] for row in obj.W.rows]

    def get_W_display(self, obj):
        return obj.W.format("z")

    def get_betas(self, obj):
        field = RationalField()
        return [[[field.to_representation(x) for x in row] for row in beta] for beta in obj.betas]

    def get_diamonds(self, obj):
        return {str(d): [list(row) for row in obj.diamonds[d]] for d in units(obj.Q)}


class ALMatrixPayloadSerializer(serializers.Serializer):
    """Validates an ``ALMatrixSerializer`` document; ``save()`` returns an ``ALMatrix``."""

    space = CuspSpaceSerializer()
    conductor = serializers.IntegerField(min_value=1)
    alpha = serializers.IntegerField(min_value=1)
    B = serializers.IntegerField(min_value=1)
    C = serializers.IntegerField(min_value=1)
    A = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    basis = serializers.ListField(child=serializers.DictField())
    W = serializers.ListField(child=serializers.ListField(child=CycNumField()))
    betas = serializers.ListField(
        child=serializers.ListField(child=serializers.ListField(child=RationalField()))
    )
    diamonds = serializers.DictField(
        child=serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    )

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
        if len(attrs['A']) != g or len(attrs['W']) != g:
            raise serializers.ValidationError("basis, A and W sizes disagree")
        try:
            attrs['space'] = CuspSpaceSerializer().create(attrs['space'])
        except CuspformsError as e:
            raise serializers.ValidationError(str(e)) from e
        return attrs

    def create(self, validated_data):
        space = validated_data['space']
        Q = validated_data['conductor']
        basis = ZBasis(
            space,
            tuple(validated_data['basis']),
            tuple(tuple(row) for row in validated_data['A']),
            validated_data['alpha'],
        )
        rep = DiamondRep(
            space.N, Q,
            {int(d): tuple(tuple(row) for row in m) for d, m in validated_data['diamonds'].items()},
        )
        return ALMatrix(
            CycMatrix(Q, tuple(tuple(row) for row in validated_data['W'])),
            basis,
            rep,
            tuple(tuple(tuple(row) for row in beta) for beta in validated_data['betas']),
            validated_data['B'],
            validated_data['C'],
        )
