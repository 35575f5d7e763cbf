from jobs.management.commands._base import JobCommand


class Command(JobCommand):
    help = "Validate newform fixtures: every file, or those needed for --level"

    job = 'validate_fixtures'
    level_required = False
