"""
Persisted computation results.

- CachedComputation: one verified (or explicitly unverified) result per
  cache key, with the JSON payload and its verification report
"""

from django.db import models

from core.models import TimeStampedModel

FORMAT_VERSION = 1


class CachedComputation(TimeStampedModel):
    """
    A computed Atkin-Lehner matrix, SL2 action table or curve model.

    ``cache_key`` hashes the job inputs together with the newform fixture
    files that were consulted, so editing a fixture invalidates the entry.
    """

    class Kind(models.TextChoices):
        AL_MATRIX = 'AL_MATRIX', 'Atkin-Lehner matrix'
        SL2_TABLE = 'SL2_TABLE', 'SL2 action table'
        CURVE_MODEL = 'CURVE_MODEL', 'Curve model'

    kind = models.CharField(
        max_length=20,
        choices=Kind.choices,
        verbose_name="Kind"
    )
    cache_key = models.CharField(
        max_length=64,
        unique=True,
        verbose_name="Cache key",
        help_text="SHA-256 of the inputs and fixture contents"
    )
    level = models.PositiveIntegerField(verbose_name="Level")
    weight = models.PositiveIntegerField(verbose_name="Weight")
    inputs = models.JSONField(default=dict, verbose_name="Inputs")
    payload = models.JSONField(verbose_name="Payload")
    report = models.JSONField(default=dict, verbose_name="Verification report")
    verified = models.BooleanField(default=False, verbose_name="Verified")
    seed = models.BigIntegerField(null=True, blank=True, verbose_name="Random seed")
    format_version = models.PositiveSmallIntegerField(default=FORMAT_VERSION, verbose_name="Format version")

    class Meta(TimeStampedModel.Meta):
        verbose_name = "Cached computation"
        verbose_name_plural = "Cached computations"
        indexes = [
            models.Index(fields=['kind', 'level', 'weight'], name='jobs_cache_kind_lvl_wt_idx'),
        ]

    def __str__(self):
        return f"{self.get_kind_display()} N={self.level} k={self.weight} ({self.cache_key[:12]})"
