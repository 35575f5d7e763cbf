"""
Result cache backed by ``CachedComputation``.

Keys hash the job inputs together with the newform fixtures consulted.
Entries are verified again when loaded; an entry that cannot be parsed
or fails its checks is deleted so the caller recomputes it.
"""

import logging
from typing import Callable, Iterable, Optional, Tuple

from django.db import DatabaseError, transaction
from sympy import divisors

from alcore.reconstruct import ALMatrix
from alcore.serializers import ALMatrixPayloadSerializer, ALMatrixSerializer
from alcore.verification import INFORMATIONAL, verify_W
from core.exceptions import CuspformsError
from core.utils import content_hash
from jobs.models import FORMAT_VERSION, CachedComputation
from newforms.loader import NewformStore
from sl2.serializers import ActionTablePayloadSerializer, ActionTableSerializer
from sl2.table import ActionTable, verify_table

logger = logging.getLogger(__name__)

Kind = CachedComputation.Kind


def fixture_keys(level: int, weight: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((M, weight) for M in divisors(level))


def cache_key(kind: str, inputs: dict, store: NewformStore, keys: Iterable[Tuple[int, int]]) -> str:
    return content_hash(kind, FORMAT_VERSION, inputs, store.fingerprint(keys))


def table_passed(report: dict) -> bool:
    """All SL2 relations and the required W checks hold."""
    return all(
        ok for name, ok in report.items()
        if not (name.startswith("W.") and name[2:] in INFORMATIONAL)
    )


def _load_al_matrix(payload: dict) -> Tuple[ALMatrix, dict, bool]:
    serializer = ALMatrixPayloadSerializer(data=payload)
    if not serializer.is_valid():
        raise CuspformsError(f"unparsable payload: {dict(serializer.errors)}")
    al = serializer.save()
    report = verify_W(al)
    return al, report.to_dict(), report.passed


def _load_table(payload: dict) -> Tuple[ActionTable, dict, bool]:
    serializer = ActionTablePayloadSerializer(data=payload)
    if not serializer.is_valid():
        raise CuspformsError(f"unparsable payload: {dict(serializer.errors)}")
    table = serializer.save()
    table.report.update(verify_table(table))
    return table, dict(table.report), table_passed(table.report)


LOADERS = {
    Kind.AL_MATRIX: _load_al_matrix,
    Kind.SL2_TABLE: _load_table,
}


def _lookup(key: str) -> Optional[CachedComputation]:
    try:
        return CachedComputation.objects.filter(cache_key=key).first()
    except DatabaseError as e:
        logger.warning(f"Result cache unavailable: {e}")
        return None


def load(kind: str, key: str):
    """
    The verified object stored under ``key``, or None.

    Corrupt or failing entries are deleted.
    """
    entry = _lookup(key)
    if entry is None:
        logger.info(f"Cache miss for {kind} {key[:12]}")
        return None
    if entry.kind != kind or entry.format_version != FORMAT_VERSION:
        logger.warning(f"Cache entry {key[:12]} has kind {entry.kind} v{entry.format_version}; rebuilding")
        entry.delete()
        return None
    try:
        obj, report, passed = LOADERS[kind](entry.payload)
    except (CuspformsError, KeyError, TypeError, ValueError) as e:
        logger.error(f"Corrupt cache entry {key[:12]} ({e}); rebuilding")
        entry.delete()
        return None
    if not passed:
        logger.error(f"Cache entry {key[:12]} failed verification on load; rebuilding")
        entry.delete()
        return None
    logger.info(f"Cache hit for {entry}")
    return obj


def store(
    kind: str,
    key: str,
    level: int,
    weight: int,
    inputs: dict,
    payload: dict,
    report: dict,
    verified: bool,
    seed: Optional[int] = None,
) -> Optional[CachedComputation]:
    try:
        with transaction.atomic():
            entry, created = CachedComputation.objects.update_or_create(
                cache_key=key,
                defaults={
                    'kind': kind,
                    'level': level,
                    'weight': weight,
                    'inputs': inputs,
                    'payload': payload,
                    'report': report,
                    'verified': verified,
                    'seed': seed,
                    'format_version': FORMAT_VERSION,
                },
            )
    except DatabaseError as e:
        logger.warning(f"Could not store {kind} {key[:12]}: {e}")
        return None
    logger.info(f"{'Stored' if created else 'Updated'} {entry}")
    return entry


def cached(
    kind: str,
    key: str,
    compute: Callable[[], object],
    serialize: Callable[[object], Tuple[dict, dict, bool]],
    level: int,
    weight: int,
    inputs: dict,
    seed: Optional[int] = None,
    enabled: bool = True,
):
    """
    Load ``key`` or compute, serialize and store it.

    Only verified results are written back.
    """
    if enabled:
        obj = load(kind, key)
        if obj is not None:
            return obj
    obj = compute()
    if enabled:
        payload, report, verified = serialize(obj)
        if verified:
            store(kind, key, level, weight, inputs, payload, report, verified, seed)
    return obj


def serialize_al_matrix(al: ALMatrix, report) -> Tuple[dict, dict, bool]:
    return dict(ALMatrixSerializer(al).data), report.to_dict(), report.passed


def serialize_table(table: ActionTable) -> Tuple[dict, dict, bool]:
    return dict(ActionTableSerializer(table).data), dict(table.report), table_passed(table.report)
