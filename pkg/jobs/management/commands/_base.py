"""
Shared options and error handling for the computation commands.
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import EXIT_OK, CuspformsError
from jobs.serializers import job_config
from jobs.services import run, write_result

logger = logging.getLogger(__name__)


def on_off(value: str) -> bool:
    return value == 'on'


class JobCommand(BaseCommand):
    """Parses the shared flags into a ``JobConfig``, runs the job and prints or writes its JSON."""

    job = None
    level_required = True

    def add_arguments(self, parser):
        parser.add_argument('--level', type=int, required=self.level_required, help="Level N")
        parser.add_argument('--weight', type=int, default=2, help="Weight k (default 2)")
        parser.add_argument('--fixtures', help="Newform fixture directory (default NEWFORM_FIXTURES_DIR)")
        parser.add_argument('--precision-bits', type=int, help="Starting precision in bits (>= 64)")
        parser.add_argument('--max-escalations', type=int, help="Precision doublings allowed (0-8)")
        parser.add_argument('--out', help="Write the JSON result to this file")
        parser.add_argument('--seed', type=int, help="Seed recorded in the report (default RANDOM_SEED)")
        parser.add_argument('--no-cache', action='store_true', help="Neither read nor write the result cache")
        parser.add_argument(
            '--verify-only', choices=('on', 'off'), default='on',
            help="'off' emits the result even when verification fails",
        )

    def job_options(self, options) -> dict:
        return {}

    def handle(self, *args, **options):
        try:
            cfg = job_config(
                command=self.job,
                level=options.get('level'),
                weight=options['weight'],
                fixtures=options.get('fixtures'),
                precision_bits=options.get('precision_bits'),
                max_escalations=options.get('max_escalations'),
                out=options.get('out'),
                seed=options.get('seed'),
                use_cache=not options['no_cache'],
                verify_only=on_off(options['verify_only']),
                **self.job_options(options),
            )
            result = run(cfg)
        except CuspformsError as e:
            logger.error(f"{self.job} failed: {e}")
            raise CommandError(str(e), returncode=e.exit_code) from e

        text = write_result(result, cfg.out)
        if cfg.out is None:
            self.stdout.write(text, ending='')
        if result.status != EXIT_OK:
            for name in result.failures:
                self.stderr.write(f"FAILED {name}")
            raise CommandError(
                f"{self.job}: {len(result.failures)} check(s) failed", returncode=result.status
            )
        if cfg.out is not None:
            self.stdout.write(self.style.SUCCESS(f"{self.job}: verified result written to {cfg.out}"))
