from jobs.management.commands._base import JobCommand, on_off


class Command(JobCommand):
    help = "Compute the canonical model of X_G for a subgroup G of GL2(Z/NZ)"

    job = 'curve_model'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--group', required=True, help="JSON file with modulus and generators")
        parser.add_argument(
            '--lll', choices=('on', 'off'), default='off',
            help="LLL-reduce the invariant lattice before fixing the basis",
        )

    def job_options(self, options):
        return {'group': options['group'], 'lll': on_off(options['lll'])}
