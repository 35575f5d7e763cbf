"""
Pytest configuration and fixtures for the cuspforms tests.
"""

from fractions import Fraction
from pathlib import Path

import pytest
from rest_framework.test import APIClient

from core.utils import seeded_rng
from newforms.loader import NewformStore
from qexp.series import QExp
from sl2.table import ActionTable
from zlinalg.cyclomatrix import CycMatrix

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


@pytest.fixture(autouse=True)
def fixture_settings(settings):
    """Point every test at the bundled newform fixtures."""
    settings.NEWFORM_FIXTURES_DIR = FIXTURES / 'newforms'
    settings.RESULT_CACHE_ENABLED = True
    return settings


@pytest.fixture
def api_client():
    """Return an unauthenticated API client."""
    return APIClient()


@pytest.fixture
def fixtures_dir():
    return FIXTURES / 'newforms'


@pytest.fixture
def groups_dir():
    return FIXTURES / 'groups'


@pytest.fixture
def store(fixtures_dir):
    """Return a store over the bundled fixtures."""
    return NewformStore(fixtures_dir)


@pytest.fixture
def rng():
    return seeded_rng(1729)


@pytest.fixture
def require_fixtures(store):
    """Return a check that skips the calling test unless every (level, weight) fixture exists."""
    def check(*keys):
        missing = [k for k in keys if not store.has(*k)]
        if missing:
            pytest.skip(f"newform fixtures not bundled: {missing}")
    return check


def _rows_to_forms(rows, N, k):
    return tuple(QExp((0,) + tuple(row), width=N, weight=k, level=N) for row in rows)


@pytest.fixture
def tetrahedral_table():
    """
    A synthetic 3-dimensional table at N = 3, k = 2.

    T = diag(z, z^2, 1) and S = 2/3 J - I generate the 3-dimensional
    representation of PSL2(Z/3Z).
    """
    N = 3
    A = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    third = Fraction(1, 3)
    S = [[2 * third - (i == j) for j in range(3)] for i in range(3)]
    return ActionTable(N, 2, _rows_to_forms(A, N, 2), A, CycMatrix.from_rows(S, N))


@pytest.fixture
def sign_table():
    """A 1-dimensional table at N = 2 where S and T both act by -1."""
    N = 2
    A = ((1, 0),)
    return ActionTable(N, 2, _rows_to_forms(A, N, 2), A, CycMatrix.from_rows([[-1]], N))


@pytest.fixture
def aplist_path():
    return FIXTURES / 'aplist_11a.txt'
