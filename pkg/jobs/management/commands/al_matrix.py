from jobs.management.commands._base import JobCommand


class Command(JobCommand):
    help = "Compute the verified Atkin-Lehner matrix of S_k(Gamma_0(N) cap Gamma_1(M))"

    job = 'al_matrix'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--gamma1-modulus', type=int, default=1,
            help="M dividing N; 1 selects Gamma_0(N), N selects Gamma_1(N)",
        )

    def job_options(self, options):
        return {'gamma1_modulus': options['gamma1_modulus']}
