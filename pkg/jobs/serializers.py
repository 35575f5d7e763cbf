"""
Job options and stored results.

``JobConfigSerializer`` validates the options shared by every management
command and materializes them as a frozen ``JobConfig``.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from django.conf import settings
from rest_framework import serializers

from core.exceptions import JobConfigError
from core.precision import PrecisionPolicy
from core.serializers import validated
from jobs.models import CachedComputation

COMMANDS = ('al_matrix', 'sl2_table', 'curve_model', 'pseudo_eigenvalue', 'validate_fixtures')


@dataclass(frozen=True)
class JobConfig:
    command: str
    level: Optional[int]
    weight: int
    fixtures: Path
    precision_bits: int
    max_escalations: int
    out: Optional[Path] = None
    group: Optional[Path] = None
    gamma1_modulus: Optional[int] = None
    lll: bool = False
    verify_only: bool = True
    seed: int = 0
    use_cache: bool = True

    @property
    def policy(self) -> PrecisionPolicy:
        return PrecisionPolicy(self.precision_bits, self.max_escalations)

    def describe(self) -> dict:
        """The inputs that determine the result (paths and cache switches excluded)."""
        out = {
            'command': self.command,
            'level': self.level,
            'weight': self.weight,
            'precision_bits': self.precision_bits,
            'max_escalations': self.max_escalations,
        }
        if self.gamma1_modulus is not None:
            out['gamma1_modulus'] = self.gamma1_modulus
        if self.command == 'curve_model':
            out['lll'] = self.lll
        return out


class JobConfigSerializer(serializers.Serializer):
    command = serializers.ChoiceField(choices=COMMANDS)
    level = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    weight = serializers.IntegerField(min_value=1, default=2)
    fixtures = serializers.CharField(required=False, allow_null=True, allow_blank=True)
    precision_bits = serializers.IntegerField(required=False, allow_null=True)
    max_escalations = serializers.IntegerField(required=False, allow_null=True)
    out = serializers.CharField(required=False, allow_null=True, allow_blank=True)
    group = serializers.CharField(required=False, allow_null=True, allow_blank=True)
    gamma1_modulus = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    lll = serializers.BooleanField(default=False)
    verify_only = serializers.BooleanField(default=True)
    seed = serializers.IntegerField(required=False, allow_null=True)
    use_cache = serializers.BooleanField(default=True)

    def validate_precision_bits(self, value):
        if value is None:
            return settings.AL_PRECISION_START_BITS
        if value < 64:
            raise serializers.ValidationError(f"precision start must be >= 64 bits, got {value}")
        return value

    def validate_max_escalations(self, value):
        if value is None:
            return settings.AL_MAX_ESCALATIONS
        if not 0 <= value <= 8:
            raise serializers.ValidationError(f"escalations must lie in [0, 8], got {value}")
        return value

    def validate(self, attrs):
        command = attrs['command']
        if command != 'validate_fixtures' and not attrs.get('level'):
            raise serializers.ValidationError(f"{command} needs --level")
        if command == 'curve_model':
            if not attrs.get('group'):
                raise serializers.ValidationError("curve_model needs --group")
            if attrs['weight'] != 2:
                raise serializers.ValidationError("curve models are computed in weight 2")
        attrs.setdefault('precision_bits', settings.AL_PRECISION_START_BITS)
        attrs.setdefault('max_escalations', settings.AL_MAX_ESCALATIONS)
        if attrs.get('seed') is None:
            attrs['seed'] = settings.RANDOM_SEED
        if not settings.RESULT_CACHE_ENABLED:
            attrs['use_cache'] = False
        return attrs

    def create(self, validated_data):
        data = dict(validated_data)
        fixtures = data.pop('fixtures', None) or settings.NEWFORM_FIXTURES_DIR
        out = data.pop('out', None)
        group = data.pop('group', None)
        return JobConfig(
            fixtures=Path(fixtures),
            out=Path(out) if out else None,
            group=Path(group) if group else None,
            level=data.pop('level', None),
            **data,
        )


def job_config(**options) -> JobConfig:
    """
    Raises:
        JobConfigError: an option is out of range or missing
    """
    serializer = JobConfigSerializer(data=options)
    validated(serializer, JobConfigError, "options")
    return serializer.save()


class CachedComputationSerializer(serializers.ModelSerializer):
    kind_display = serializers.CharField(source='get_kind_display', read_only=True)

    class Meta:
        model = CachedComputation
        fields = [
            'id', 'kind', 'kind_display', 'cache_key', 'level', 'weight',
            'inputs', 'payload', 'report', 'verified', 'seed', 'format_version',
            'created_at', 'updated_at',
        ]
        read_only_fields = fields
