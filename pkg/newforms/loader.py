"""
Loading newform fixtures from disk.

Fixture files live in a directory (``settings.NEWFORM_FIXTURES_DIR`` by
default), one per (level, weight), named ``mf_<level>_<weight>.json``.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from django.conf import settings

from core.exceptions import FixtureError, MissingFixtureError, NewformDataError
from core.serializers import validated
from core.utils import file_hash
from newforms.records import NewformRecord
from newforms.serializers import NewformFileSerializer, NewformRecordSerializer

logger = logging.getLogger(__name__)


def fixture_name(level: int, weight: int) -> str:
    return f"mf_{level}_{weight}.json"


def validate_record(rec: NewformRecord) -> NewformRecord:
    """
    Check the arithmetic invariants of a record.

    Raises:
        NewformDataError: a_1 != 1, or the a_{p^2} / nebentypus relations fail
    """
    if not rec.coefficient(1).is_one():
        raise NewformDataError(f"newform {rec.label}: a_1 = {rec.coefficient(1)} != 1")
    rec.nebentypus
    return rec


def load_newforms(path, level: int, weight: int) -> Tuple[NewformRecord, ...]:
    """
    Read and validate one fixture file.

    Args:
        path: JSON file
        level: Expected level M
        weight: Expected weight k

    Returns:
        One record per Galois orbit, in orbit order

    Raises:
        MissingFixtureError: the file does not exist
        FixtureError: unreadable JSON or a schema violation
        NewformDataError: a record fails an arithmetic invariant
    """
    path = Path(path)
    if not path.exists():
        raise MissingFixtureError(level, weight, path.parent)
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise FixtureError(f"cannot read {path}: {e}") from e
    data = validated(NewformFileSerializer(data=payload), FixtureError, f"fixture {path.name}")
    if (data['level'], data['weight']) != (level, weight):
        raise FixtureError(
            f"{path.name} holds level {data['level']} weight {data['weight']}, "
            f"expected level {level} weight {weight}"
        )
    records = []
    for index, raw in enumerate(data['newforms']):
        serializer = NewformRecordSerializer(
            data=raw, context={'level': level, 'weight': weight, 'index': index}
        )
        validated(serializer, FixtureError, f"record {index} of {path.name}")
        records.append(validate_record(serializer.save()))
    records.sort(key=NewformRecord.sort_key)
    logger.info(f"Loaded {len(records)} newform orbit(s) of level {level}, weight {weight}")
    return tuple(records)


class NewformStore:
    """Cached access to the fixture directory."""

    def __init__(self, root: Optional[Path] = None):
        self.root = Path(root if root is not None else settings.NEWFORM_FIXTURES_DIR)
        self._cache: Dict[Tuple[int, int], Tuple[NewformRecord, ...]] = {}

    def path_for(self, level: int, weight: int) -> Path:
        return self.root / fixture_name(level, weight)

    def has(self, level: int, weight: int) -> bool:
        return self.path_for(level, weight).exists()

    def load(self, level: int, weight: int) -> Tuple[NewformRecord, ...]:
        key = (level, weight)
        if key not in self._cache:
            if not self.has(level, weight):
                raise MissingFixtureError(level, weight, self.root)
            self._cache[key] = load_newforms(self.path_for(level, weight), level, weight)
        return self._cache[key]

    def available(self) -> List[Tuple[int, int]]:
        """(level, weight) pairs present in the directory."""
        found = []
        for path in sorted(self.root.glob("mf_*_*.json")):
            parts = path.stem.split("_")
            if len(parts) == 3 and parts[1].isdigit() and parts[2].isdigit():
                found.append((int(parts[1]), int(parts[2])))
        return sorted(found)

    def fingerprint(self, keys: Iterable[Tuple[int, int]]) -> str:
        """Content hash of the fixture files for ``keys`` (missing files are skipped)."""
        return file_hash(p for p in (self.path_for(*k) for k in keys) if p.exists())

    def __repr__(self):
        return f"NewformStore({self.root})"
