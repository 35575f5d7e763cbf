from jobs.management.commands._base import JobCommand


class Command(JobCommand):
    help = "Certified and exact Atkin-Lehner pseudo-eigenvalues of the newforms of level N"

    job = 'pseudo_eigenvalue'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--gamma1-modulus', type=int,
            help="M dividing N for the space carrying W (default N)",
        )

    def job_options(self, options):
        return {'gamma1_modulus': options.get('gamma1_modulus')}
