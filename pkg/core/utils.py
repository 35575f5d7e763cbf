"""
Utility functions shared across the cuspforms apps.

This module contains reusable helpers:
- rational number parsing and "p/q" formatting
- canonical JSON and content hashing for cache keys
- atomic file output
- seeded random generators for reproducible property checks
"""

import hashlib
import json
import os
import random
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Union

from django.conf import settings

from core.exceptions import InputError

Rational = Union[int, Fraction]


def parse_rational(value: Any) -> Fraction:
    """
    Parse an integer, a Fraction or a "p/q" string into a Fraction.

    Args:
        value: int, Fraction, or string such as "-3/7" or "12"

    Returns:
        The exact rational value

    Raises:
        InputError: if the value is not a rational literal
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational number: {value!r} ({e})") from e
    raise InputError(f"not a rational number: {value!r}")


def format_rational(value: Rational) -> str:
    """Format a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def canonical_json(payload: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed separators and indentation."""
    return json.dumps(payload, sort_keys=True, indent=2, separators=(',', ': ')) + "\n"


def content_hash(*parts: Any) -> str:
    """SHA-256 over the canonical JSON of ``parts``."""
    digest = hashlib.sha256()
    for part in parts:
        digest.update(json.dumps(part, sort_keys=True, separators=(',', ':')).encode())
        digest.update(b"\x00")
    return digest.hexdigest()


def file_hash(paths: Iterable[Path]) -> str:
    """SHA-256 over the names and bytes of ``paths`` in sorted order."""
    digest = hashlib.sha256()
    for path in sorted(Path(p) for p in paths):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write ``text`` to ``path`` through a temporary file and ``os.replace``.

    Args:
        path: Destination file
        text: Content to write

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def seeded_rng(seed: int = None) -> random.Random:
    """Return a ``random.Random`` seeded from ``seed`` or ``settings.RANDOM_SEED``."""
    if seed is None:
        seed = settings.RANDOM_SEED
    return random.Random(seed)
