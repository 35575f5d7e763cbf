"""
Serializers for newform fixture files.

One JSON file per (level, weight):

    {"level": M, "weight": k, "newforms": [record, ...]}

and each record is

    {"label": "11.2.a.a", "field_poly": [c_0, ..., 1],
     "an": [[...], ...]            # a_1, a_2, ... in the power basis of a
       or "ap": {"2": [...], ...}, # prime eigenvalues, expanded on load
     "char": {"modulus": M, "values": [[d, value], ...]},   # optional
     "n_coeffs": n}

``field_poly`` lists coefficients constant term first. A character value
is a power-basis vector in L or a cyclotomic number object.
"""

from rest_framework import serializers

from core.exceptions import CuspformsError, NewformDataError
from core.serializers import RationalVectorField
from cyclo.serializers import cycnum_from_json
from newforms.adapters import expand_from_ap
from newforms.character import character_closure
from newforms.records import NewformRecord, default_label
from qexp.numberfield import NumberField


class CharacterSerializer(serializers.Serializer):
    modulus = serializers.IntegerField(min_value=1)
    values = serializers.ListField(child=serializers.ListField(min_length=2, max_length=2))

    def validate_values(self, value):
        parsed = []
        for d, v in value:
            if not isinstance(d, int) or isinstance(d, bool):
                raise serializers.ValidationError(f"character argument {d!r} is not an integer")
            if isinstance(v, dict):
                parsed.append((d, cycnum_from_json(v)))
            else:
                parsed.append((d, RationalVectorField().to_internal_value(v)))
        return parsed


class NewformRecordSerializer(serializers.Serializer):
    """Validates one record; ``save()`` returns a ``NewformRecord``."""

    label = serializers.CharField(required=False)
    level = serializers.IntegerField(min_value=1, required=False)
    weight = serializers.IntegerField(min_value=1, required=False)
    field_poly = serializers.ListField(child=serializers.IntegerField(), min_length=2)
    an = serializers.ListField(child=RationalVectorField(), required=False)
    ap = serializers.DictField(child=RationalVectorField(), required=False)
    char = CharacterSerializer(required=False)
    n_coeffs = serializers.IntegerField(min_value=1)

    def validate_field_poly(self, value):
        try:
            return NumberField(tuple(value))
        except CuspformsError as e:
            raise serializers.ValidationError(str(e)) from e

    def validate_ap(self, value):
        parsed = {}
        for key, vec in value.items():
            try:
                parsed[int(key)] = vec
            except ValueError as e:
                raise serializers.ValidationError(f"prime key {key!r} is not an integer") from e
        return parsed

    def validate(self, attrs):
        level = self.context['level']
        weight = self.context['weight']
        if attrs.get('level', level) != level or attrs.get('weight', weight) != weight:
            raise serializers.ValidationError(
                f"record level/weight differ from the file's ({level}, {weight})"
            )
        if ('an' in attrs) == ('ap' in attrs):
            raise serializers.ValidationError("a record needs exactly one of 'an' and 'ap'")
        field = attrs['field_poly']
        vectors = attrs['an'] if 'an' in attrs else attrs['ap'].values()
        for vec in vectors:
            if len(vec) > field.degree:
                raise serializers.ValidationError(
                    f"coefficient vector of length {len(vec)} in a degree-{field.degree} field"
                )
        if 'an' in attrs and len(attrs['an']) < attrs['n_coeffs']:
            raise serializers.ValidationError(
                f"n_coeffs={attrs['n_coeffs']} but only {len(attrs['an'])} coefficients given"
            )
        char = attrs.get('char')
        if char and char['modulus'] != level:
            raise serializers.ValidationError(f"character modulus {char['modulus']} != level {level}")
        return attrs

    def create(self, validated_data):
        level = self.context['level']
        weight = self.context['weight']
        field = validated_data['field_poly']
        n_coeffs = validated_data['n_coeffs']
        label = validated_data.get('label') or default_label(level, weight, self.context.get('index', 0))
        char_values = {}
        if 'char' in validated_data:
            for d, v in validated_data['char']['values']:
                char_values[d] = field.element(v) if isinstance(v, list) else v
        if 'an' in validated_data:
            an = tuple(field.element(v) for v in validated_data['an'][:n_coeffs])
        else:
            an = expand_from_ap(
                level, weight, field,
                {p: field.element(v) for p, v in validated_data['ap'].items()},
                _ap_character(level, field, char_values, label),
                n_coeffs,
            )
        return NewformRecord(label, level, weight, field, an, char_values)


def _ap_character(level, field, char_values, label):
    """The nebentypus used to expand an a_p record: supplied values, else trivial."""
    if level == 1 or not char_values:
        return lambda p: field.one()
    if any(not hasattr(v, 'field') for v in char_values.values()):
        raise NewformDataError(f"newform {label}: a_p records need character values in L")
    table = character_closure(level, list(char_values.items()), field, label)
    return lambda p: table[p % level]


class NewformFileSerializer(serializers.Serializer):
    level = serializers.IntegerField(min_value=1)
    weight = serializers.IntegerField(min_value=1)
    newforms = serializers.ListField(child=serializers.DictField())
