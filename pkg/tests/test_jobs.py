"""
Tests for job options, the result cache, the management commands and the
computations API.
"""

import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.urls import reverse
from rest_framework import status

from core.exceptions import EXIT_INPUT, JobConfigError
from jobs import cache, services
from jobs.management.commands.import_aplist import aplist_records
from jobs.models import CachedComputation
from jobs.serializers import job_config
from jobs.services import FORMATS
from newforms.loader import NewformStore, load_newforms


def run_command(name, *args, **options):
    out = StringIO()
    call_command(name, *args, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


def W_entries(document):
    return [[int(x['coeffs'][0]) for x in row] for row in document['result']['W']]


class TestJobConfig:
    """Tests for option validation."""

    def test_defaults(self, settings):
        """Test unset options fall back to settings."""
        cfg = job_config(command='al_matrix', level=11)
        assert cfg.weight == 2
        assert cfg.precision_bits == settings.AL_PRECISION_START_BITS
        assert cfg.max_escalations == settings.AL_MAX_ESCALATIONS
        assert cfg.seed == settings.RANDOM_SEED
        assert cfg.fixtures == settings.NEWFORM_FIXTURES_DIR
        assert cfg.policy.start_bits == cfg.precision_bits

    def test_low_precision_rejected(self):
        """Test precision below 64 bits is refused."""
        with pytest.raises(JobConfigError):
            job_config(command='al_matrix', level=11, precision_bits=32)

    def test_escalations_bounded(self):
        """Test more than 8 escalations are refused."""
        with pytest.raises(JobConfigError):
            job_config(command='al_matrix', level=11, max_escalations=9)

    def test_level_required(self):
        """Test every job but validate_fixtures needs a level."""
        with pytest.raises(JobConfigError):
            job_config(command='sl2_table')
        assert job_config(command='validate_fixtures').level is None

    def test_curve_model_options(self, groups_dir):
        """Test curve models need a group file and weight 2."""
        with pytest.raises(JobConfigError):
            job_config(command='curve_model', level=7)
        with pytest.raises(JobConfigError):
            job_config(command='curve_model', level=7, weight=4, group=str(groups_dir / 'x7.json'))

    def test_cache_switch(self, settings):
        """Test RESULT_CACHE_ENABLED=False disables the cache."""
        settings.RESULT_CACHE_ENABLED = False
        assert not job_config(command='al_matrix', level=11).use_cache

    def test_describe_excludes_paths(self, tmp_path):
        """Test the recorded inputs leave out paths and cache switches."""
        cfg = job_config(command='al_matrix', level=11, out=str(tmp_path / 'w.json'), use_cache=False)
        assert cfg.describe() == {
            'command': 'al_matrix', 'level': 11, 'weight': 2,
            'precision_bits': cfg.precision_bits, 'max_escalations': cfg.max_escalations,
        }


@pytest.mark.django_db
class TestAlMatrixCommand:
    """Tests for the al_matrix command."""

    def test_level_11(self, fixtures_dir):
        """Test W_11 on S_2(Gamma_0(11)) is -11."""
        document = json.loads(run_command('al_matrix', level=11, fixtures=str(fixtures_dir)))
        assert document['format'] == FORMATS['al_matrix']
        assert document['verified']
        assert document['report']['passed']
        assert W_entries(document) == [[-11]]

    def test_level_22(self, fixtures_dir):
        """Test W_22 on the oldforms from 11a."""
        document = json.loads(run_command('al_matrix', level=22, fixtures=str(fixtures_dir)))
        assert document['result']['dimension'] == 2
        assert W_entries(document) == [[-22, 0], [-11, 22]]

    def test_level_1_is_empty(self, fixtures_dir):
        """Test S_2(SL2(Z)) = 0 gives an empty verified result."""
        document = json.loads(run_command('al_matrix', level=1, fixtures=str(fixtures_dir)))
        assert document['verified']
        assert document['result']['W'] == []

    def test_writes_out_file(self, fixtures_dir, tmp_path):
        """Test --out writes the document atomically."""
        target = tmp_path / 'w11.json'
        message = run_command('al_matrix', level=11, fixtures=str(fixtures_dir), out=str(target))
        assert 'verified result written' in message
        assert W_entries(json.loads(target.read_text())) == [[-11]]

    def test_missing_fixture(self, fixtures_dir):
        """Test a level without fixtures exits with status 3."""
        with pytest.raises(CommandError) as excinfo:
            run_command('al_matrix', level=13, fixtures=str(fixtures_dir))
        assert excinfo.value.returncode == EXIT_INPUT

    def test_bad_gamma1_modulus(self, fixtures_dir):
        """Test a Gamma_1 modulus must divide the level."""
        with pytest.raises(CommandError) as excinfo:
            run_command('al_matrix', level=11, gamma1_modulus=3, fixtures=str(fixtures_dir))
        assert excinfo.value.returncode == EXIT_INPUT

    def test_output_is_deterministic(self, fixtures_dir):
        """Test two runs print identical JSON."""
        first = run_command('al_matrix', level=11, fixtures=str(fixtures_dir), no_cache=True)
        second = run_command('al_matrix', level=11, fixtures=str(fixtures_dir), no_cache=True)
        assert first == second


@pytest.mark.django_db
class TestResultCache:
    """Tests for cached results."""

    def test_result_is_stored_once(self, fixtures_dir):
        """Test a verified result is stored and then reused."""
        run_command('al_matrix', level=11, fixtures=str(fixtures_dir))
        assert CachedComputation.objects.filter(kind=CachedComputation.Kind.AL_MATRIX).count() == 1
        run_command('al_matrix', level=11, fixtures=str(fixtures_dir))
        assert CachedComputation.objects.count() == 1

    def test_no_cache_flag(self, fixtures_dir):
        """Test --no-cache neither reads nor writes."""
        run_command('al_matrix', level=11, fixtures=str(fixtures_dir), no_cache=True)
        assert not CachedComputation.objects.exists()

    def test_corrupt_entry_is_rebuilt(self, fixtures_dir):
        """Test an unparsable entry is deleted and recomputed."""
        run_command('al_matrix', level=11, fixtures=str(fixtures_dir))
        entry = CachedComputation.objects.get()
        entry.payload = {'W': 'garbage'}
        entry.save()
        assert cache.load(CachedComputation.Kind.AL_MATRIX, entry.cache_key) is None
        assert not CachedComputation.objects.exists()
        document = json.loads(run_command('al_matrix', level=11, fixtures=str(fixtures_dir)))
        assert W_entries(document) == [[-11]]
        assert CachedComputation.objects.get().payload['W'] == document['result']['W']

    def test_wrong_kind_is_dropped(self, fixtures_dir):
        """Test an entry stored under another kind is not returned."""
        run_command('al_matrix', level=11, fixtures=str(fixtures_dir))
        entry = CachedComputation.objects.get()
        assert cache.load(CachedComputation.Kind.SL2_TABLE, entry.cache_key) is None
        assert not CachedComputation.objects.exists()

    def test_key_depends_on_fixtures(self, store, tmp_path, fixtures_dir):
        """Test editing a fixture changes the cache key."""
        keys = cache.fixture_keys(11, 2)
        assert keys == ((1, 2), (11, 2))
        before = cache.cache_key('AL_MATRIX', {'level': 11}, store, keys)
        for name in ('mf_1_2.json', 'mf_11_2.json'):
            (tmp_path / name).write_bytes((fixtures_dir / name).read_bytes())
        copied = NewformStore(tmp_path)
        assert cache.cache_key('AL_MATRIX', {'level': 11}, copied, keys) == before
        (tmp_path / 'mf_1_2.json').write_text('{"level": 1, "weight": 2, "newforms": []} ')
        assert cache.cache_key('AL_MATRIX', {'level': 11}, copied, keys) != before

    def test_table_passed_ignores_informational(self):
        """Test informational W checks do not fail a table."""
        assert cache.table_passed({'braid': True, 'W.c_bound_integral': False})
        assert not cache.table_passed({'braid': True, 'W.w_squared': False})


@pytest.mark.django_db
class TestOtherCommands:
    """Tests for sl2_table, curve_model, pseudo_eigenvalue and fixture commands."""

    def test_curve_model_x7(self, fixtures_dir, groups_dir):
        """Test the X(7) run reports the checked vanishing of its quartic."""
        cfg = job_config(
            command='curve_model', level=7, group=str(groups_dir / 'x7.json'),
            fixtures=str(fixtures_dir), use_cache=False,
        )
        result = services.run(cfg)
        assert result.report['model_vanishing'] is True
        assert result.verified
        assert result.result['model']['degrees'] == [4]
        assert result.result['invariants']['genus'] == 3

    def test_curve_model_unverified_model(self, fixtures_dir, groups_dir, monkeypatch):
        """Test a model that fails the vanishing check is not reported as verified."""
        monkeypatch.setattr(services, 'verify_model', lambda model, basis: False)
        cfg = job_config(
            command='curve_model', level=7, group=str(groups_dir / 'x7.json'),
            fixtures=str(fixtures_dir), use_cache=False,
        )
        result = services.run(cfg)
        assert result.report['model_vanishing'] is False
        assert not result.verified

    def test_sl2_table_level_2(self, fixtures_dir):
        """Test the empty table at N = 2."""
        document = json.loads(run_command('sl2_table', level=2, fixtures=str(fixtures_dir)))
        assert document['format'] == FORMATS['sl2_table']
        assert document['verified']
        assert document['result']['dimension'] == 0
        assert CachedComputation.objects.filter(kind=CachedComputation.Kind.SL2_TABLE).count() == 1

    def test_pseudo_eigenvalue_11a(self, fixtures_dir):
        """Test 11a has pseudo-eigenvalue of modulus 1 and exact |c|^2 = 121."""
        document = json.loads(run_command('pseudo_eigenvalue', level=11, fixtures=str(fixtures_dir)))
        assert document['verified']
        (entry,) = document['result']['newforms']
        assert entry['label'] == '11.2.a.a'
        assert entry['exact_abs_squared'] == 121
        assert entry['exact'] == {'value': {'conductor': 1, 'coeffs': ['-11']}}
        assert all(e['unit_modulus'] for e in entry['embeddings'])
        assert {e['precision'] for e in entry['embeddings']} == {128, 256}

    def test_validate_fixtures(self, fixtures_dir):
        """Test every bundled fixture loads."""
        document = json.loads(run_command('validate_fixtures', fixtures=str(fixtures_dir)))
        assert document['verified']
        levels = {item['level'] for item in document['result']['fixtures']}
        assert {1, 2, 4, 7, 11, 22, 49} <= levels

    def test_validate_fixtures_missing(self, fixtures_dir):
        """Test missing divisors of the level exit with status 3."""
        with pytest.raises(CommandError) as excinfo:
            run_command('validate_fixtures', level=13, fixtures=str(fixtures_dir))
        assert excinfo.value.returncode == EXIT_INPUT

    def test_aplist_records(self):
        """Test a_p lines become rational newform records."""
        records = aplist_records(['# header', '', '11 a -2 -1 1 -2 - 4'])
        (record,) = records[11]
        assert record['label'] == '11.2.a'
        assert record['ap']['11'] == [1]
        assert record['ap']['2'] == [-2]
        assert record['n_coeffs'] == 13

    def test_import_aplist(self, tmp_path, aplist_path):
        """Test importing the 11a table reproduces its coefficients."""
        source = str(aplist_path)
        run_command('import_aplist', source, fixtures=str(tmp_path))
        (rec,) = load_newforms(tmp_path / 'mf_11_2.json', 11, 2)
        assert rec.coefficient(2) == -2
        assert rec.coefficient(11) == 1
        assert rec.coefficient(4) == 2
        with pytest.raises(CommandError) as excinfo:
            run_command('import_aplist', source, fixtures=str(tmp_path))
        assert excinfo.value.returncode == EXIT_INPUT
        run_command('import_aplist', source, fixtures=str(tmp_path), force=True)


@pytest.mark.django_db
class TestComputationsAPI:
    """Tests for the read-only computations endpoint."""

    def store_entry(self, key, kind=CachedComputation.Kind.AL_MATRIX, level=11):
        return cache.store(kind, key, level, 2, {'level': level}, {'W': []}, {'passed': True}, True, 7)

    def test_list(self, api_client):
        """Test listing cached computations."""
        self.store_entry('a' * 64)
        self.store_entry('b' * 64, CachedComputation.Kind.SL2_TABLE, 3)
        response = api_client.get(reverse('computations-list'))
        assert response.status_code == status.HTTP_200_OK
        assert response.data['count'] == 2

    def test_filter_by_kind(self, api_client):
        """Test filtering by kind."""
        self.store_entry('a' * 64)
        self.store_entry('b' * 64, CachedComputation.Kind.SL2_TABLE, 3)
        response = api_client.get(reverse('computations-list'), {'kind': 'SL2_TABLE'})
        assert response.data['count'] == 1
        assert response.data['results'][0]['kind_display'] == 'SL2 action table'

    def test_retrieve(self, api_client):
        """Test retrieving one computation."""
        entry = self.store_entry('c' * 64)
        response = api_client.get(reverse('computations-detail', args=[entry.id]))
        assert response.status_code == status.HTTP_200_OK
        assert response.data['cache_key'] == 'c' * 64
        assert response.data['seed'] == 7

    def test_read_only(self, api_client):
        """Test the endpoint refuses writes."""
        response = api_client.post(reverse('computations-list'), {'kind': 'AL_MATRIX'}, format='json')
        assert response.status_code == status.HTTP_405_METHOD_NOT_ALLOWED
