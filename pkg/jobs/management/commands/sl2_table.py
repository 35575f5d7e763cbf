from jobs.management.commands._base import JobCommand


class Command(JobCommand):
    help = "Compute the matrices of S and T on S_k(Gamma(N)) from W at level N^2"

    job = 'sl2_table'
