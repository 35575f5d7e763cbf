"""
Convert an elliptic-curve a_p table into newform fixture files.

Each input line is "N class a_2 a_3 a_5 ..."; every isogeny class becomes
a rational weight-2 newform record stored through its a_p values.
"""

import logging
from collections import defaultdict
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import CuspformsError, FixtureError
from core.utils import atomic_write_text, canonical_json
from newforms.adapters import parse_aplist_line
from newforms.loader import fixture_name, load_newforms

logger = logging.getLogger(__name__)


def aplist_records(lines):
    """{level: [record, ...]} from a_p table lines; blank and '#' lines are skipped."""
    by_level = defaultdict(list)
    for line in lines:
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        level, iso, ap = parse_aplist_line(line)
        primes = sorted(ap)
        by_level[level].append({
            'label': f"{level}.2.{iso}",
            'field_poly': [0, 1],
            'ap': {str(p): [ap[p]] for p in primes},
            'n_coeffs': primes[-1],
        })
    return by_level


class Command(BaseCommand):
    help = "Write mf_<N>_2.json fixtures from an elliptic-curve a_p table"

    def add_arguments(self, parser):
        parser.add_argument('source', help="Text file of 'N class a_2 a_3 ...' lines")
        parser.add_argument('--fixtures', help="Output directory (default NEWFORM_FIXTURES_DIR)")
        parser.add_argument('--force', action='store_true', help="Overwrite existing fixture files")

    def handle(self, *args, **options):
        source = Path(options['source'])
        root = Path(options.get('fixtures') or settings.NEWFORM_FIXTURES_DIR)
        try:
            try:
                lines = source.read_text(encoding='utf-8').splitlines()
            except OSError as e:
                raise FixtureError(f"cannot read {source}: {e}") from e
            written = 0
            for level, records in sorted(aplist_records(lines).items()):
                path = root / fixture_name(level, 2)
                if path.exists() and not options['force']:
                    raise FixtureError(f"{path} exists; pass --force to overwrite")
                atomic_write_text(path, canonical_json({'level': level, 'weight': 2, 'newforms': records}))
                load_newforms(path, level, 2)
                logger.info(f"Imported {len(records)} newform(s) of level {level} into {path}")
                written += 1
        except CuspformsError as e:
            raise CommandError(str(e), returncode=e.exit_code) from e
        self.stdout.write(self.style.SUCCESS(f"Wrote {written} fixture file(s) to {root}"))
