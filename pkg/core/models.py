"""
Core models for the cuspforms project.

This module contains the abstract base model shared by persisted results:
- Timestamps (created_at, updated_at)
"""

from django.db import models


class TimeStampedModel(models.Model):
    """
    Abstract base model that provides creation and modification timestamps.

    Persisted computation results inherit from this class.
    """

    created_at = models.DateTimeField(
        auto_now_add=True,
        verbose_name="Created at"
    )
    updated_at = models.DateTimeField(
        auto_now=True,
        verbose_name="Updated at"
    )

    class Meta:
        abstract = True
        ordering = ['-created_at']
