"""
Job orchestration behind the management commands.

Each ``run_*`` function takes a ``JobConfig`` and returns a ``JobResult``
whose document is written as canonical JSON with a versioned header.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from alcore.pipeline import compute_al_matrix
from alcore.pseudo import exact_pseudo_eigenvalue
from alcore.spaces import CuspSpace
from alcore.verification import verify_W
from core.exceptions import (
    EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION, CuspformsError, GroupValidationError, JobConfigError,
    NotInSpaceError,
)
from core.precision import working_precision
from core.utils import atomic_write_text, canonical_json, format_rational
from cyclo.serializers import cycnum_to_json
from jobs import cache
from jobs.models import CachedComputation
from jobs.serializers import JobConfig
from modcurve.canonical import model_select, verify_model
from modcurve.groups import validate_group
from modcurve.ideals import required_terms
from modcurve.invariants import invariant_subspace
from modcurve.serializers import CurveModelSerializer, InvariantBasisSerializer, read_group_file
from newforms.loader import NewformStore
from newforms.numerics import approximate_pseudo_eigenvalue, embed_all
from sl2.serializers import ActionTableSerializer
from sl2.table import ActionTable, build_action_table

logger = logging.getLogger(__name__)

Kind = CachedComputation.Kind

FORMATS = {
    'al_matrix': 'cuspforms/al-matrix/1',
    'sl2_table': 'cuspforms/sl2-table/1',
    'curve_model': 'cuspforms/curve-model/1',
    'pseudo_eigenvalue': 'cuspforms/pseudo-eigenvalue/1',
    'validate_fixtures': 'cuspforms/fixtures/1',
}


@dataclass
class JobResult:
    command: str
    result: dict
    report: dict
    verified: bool
    inputs: dict = field(default_factory=dict)
    seed: Optional[int] = None
    failures: List[str] = field(default_factory=list)
    exit_code: Optional[int] = None

    @property
    def status(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        return EXIT_OK if self.verified else EXIT_VERIFICATION

    def document(self) -> dict:
        return {
            'format': FORMATS[self.command],
            'inputs': self.inputs,
            'seed': self.seed,
            'verified': self.verified,
            'report': self.report,
            'result': self.result,
        }

    def to_json(self) -> str:
        return canonical_json(self.document())


def write_result(result: JobResult, out=None) -> str:
    text = result.to_json()
    if out is not None:
        atomic_write_text(out, text)
        logger.info(f"Wrote {FORMATS[result.command]} to {out}")
    return text


def _store(cfg: JobConfig) -> NewformStore:
    return NewformStore(cfg.fixtures)


def _failures(report: dict) -> List[str]:
    return sorted(name for name, ok in report.items() if ok is False)


# =============================================================================
# ATKIN-LEHNER MATRICES
# =============================================================================

def al_space(cfg: JobConfig) -> CuspSpace:
    M = cfg.gamma1_modulus or 1
    if cfg.level % M:
        raise JobConfigError(f"--gamma1-modulus {M} does not divide the level {cfg.level}")
    return CuspSpace.gamma0_gamma1(cfg.weight, cfg.level, M)


def run_al_matrix(cfg: JobConfig) -> JobResult:
    store = _store(cfg)
    space = al_space(cfg)
    inputs = {'space': space.describe()}
    key = cache.cache_key(Kind.AL_MATRIX, inputs, store, cache.fixture_keys(space.N, space.k))

    al = cache.load(Kind.AL_MATRIX, key) if cfg.use_cache else None
    if al is not None:
        payload, report, verified = cache.serialize_al_matrix(al, verify_W(al))
    else:
        al, al_report = compute_al_matrix(space, store, cfg.policy, strict=cfg.verify_only)
        payload, report, verified = cache.serialize_al_matrix(al, al_report)
        if cfg.use_cache and verified:
            cache.store(Kind.AL_MATRIX, key, space.N, space.k, inputs, payload, report, True, cfg.seed)
    return JobResult(
        'al_matrix', payload, report, verified, cfg.describe(), cfg.seed,
        _failures(report['checks']),
    )


# =============================================================================
# SL2 ACTION TABLES
# =============================================================================

def action_table(cfg: JobConfig, store: NewformStore) -> ActionTable:
    """The table for (level, weight), from the cache when a verified entry exists."""
    N, k = cfg.level, cfg.weight
    inputs = {'level': N, 'weight': k}
    key = cache.cache_key(Kind.SL2_TABLE, inputs, store, cache.fixture_keys(N * N, k))
    return cache.cached(
        Kind.SL2_TABLE, key,
        lambda: build_action_table(N, k, store, cfg.policy, strict=cfg.verify_only),
        cache.serialize_table,
        N, k, inputs, cfg.seed, cfg.use_cache,
    )


def run_sl2_table(cfg: JobConfig) -> JobResult:
    table = action_table(cfg, _store(cfg))
    report = dict(table.report)
    verified = cache.table_passed(report)
    return JobResult(
        'sl2_table', dict(ActionTableSerializer(table).data), report, verified,
        cfg.describe(), cfg.seed, _failures(report),
    )


# =============================================================================
# CURVE MODELS
# =============================================================================

def run_curve_model(cfg: JobConfig) -> JobResult:
    group = validate_group(read_group_file(cfg.group))
    if group.N != cfg.level:
        raise GroupValidationError(f"group file is modulo {group.N}, --level is {cfg.level}")
    store = _store(cfg)
    table = action_table(cfg, store)
    basis = invariant_subspace(table, group, lll=cfg.lll)
    model = model_select(basis)

    terms = required_terms(basis.genus, max(model.degrees, default=2))
    report = {f"table.{name}": ok for name, ok in table.report.items()}
    report['model_vanishing'] = verify_model(model, basis)
    verified = cache.table_passed(table.report) and report['model_vanishing']
    result = {
        'group': group.describe(),
        'invariants': dict(InvariantBasisSerializer(basis, context={'terms': terms}).data),
        'model': dict(CurveModelSerializer(model).data),
    }
    inputs = dict(cfg.describe(), group=group.describe())
    if cfg.use_cache and verified:
        key = cache.cache_key(Kind.CURVE_MODEL, inputs, store, cache.fixture_keys(cfg.level ** 2, 2))
        cache.store(Kind.CURVE_MODEL, key, cfg.level, 2, inputs, result, report, True, cfg.seed)
    return JobResult('curve_model', result, report, verified, inputs, cfg.seed, _failures(report))


# =============================================================================
# PSEUDO-EIGENVALUES
# =============================================================================

def _exact_json(c) -> dict:
    value = c.as_cycnum()
    if value is not None:
        return {'value': cycnum_to_json(value)}
    return {
        'terms': [
            {'y': [format_rational(x) for x in y.coeffs], 'w': cycnum_to_json(w)}
            for y, w in c.terms
        ]
    }


def run_pseudo_eigenvalue(cfg: JobConfig) -> JobResult:
    """
    Certified lambda_N(f) balls for every newform of (level, weight), at
    the start precision and at twice that, plus the exact constant c from
    W_N where the newform lies in the selected space.
    """
    store = _store(cfg)
    N, k = cfg.level, cfg.weight
    records = store.load(N, k)
    M = cfg.gamma1_modulus or N
    if N % M:
        raise JobConfigError(f"--gamma1-modulus {M} does not divide the level {N}")
    space = CuspSpace.gamma0_gamma1(k, N, M)
    al = None
    if records:
        al, _ = compute_al_matrix(space, store, cfg.policy, strict=cfg.verify_only)

    bits = cfg.precision_bits
    forms = []
    report = {}
    for rec in records:
        entry = {'label': rec.label, 'degree': rec.degree, 'embeddings': []}
        for precision in (bits, 2 * bits):
            with working_precision(precision):
                for ef in embed_all(rec, precision):
                    lam = approximate_pseudo_eigenvalue(ef, precision)
                    entry['embeddings'].append({
                        'index': ef.embedding_index,
                        'precision': precision,
                        'b': format_rational(lam.b_used),
                        'terms': lam.terms_used,
                        'value': lam.value.str(radius=True),
                        'radius': lam.radius(),
                        'unit_modulus': lam.has_unit_modulus(),
                    })
        report[f"{rec.label}.unit_modulus"] = all(e['unit_modulus'] for e in entry['embeddings'])
        try:
            c = exact_pseudo_eigenvalue(al, rec)
        except NotInSpaceError as e:
            entry['exact'] = None
            entry['exact_reason'] = str(e)
        else:
            entry['exact'] = _exact_json(c)
            entry['exact_abs_squared'] = N ** k
            report[f"{rec.label}.exact_abs"] = True
        forms.append(entry)
    verified = all(report.values())
    return JobResult(
        'pseudo_eigenvalue', {'space': space.describe(), 'newforms': forms}, report, verified,
        cfg.describe(), cfg.seed, _failures(report),
    )


# =============================================================================
# FIXTURES
# =============================================================================

def run_validate_fixtures(cfg: JobConfig) -> JobResult:
    """Load every fixture (or those needed for --level); report missing and invalid files."""
    store = _store(cfg)
    if cfg.level:
        wanted = list(cache.fixture_keys(cfg.level, cfg.weight))
    else:
        wanted = store.available()
    entries = []
    report = {}
    for level, weight in wanted:
        name = f"{level}.{weight}"
        item = {'level': level, 'weight': weight, 'file': store.path_for(level, weight).name}
        try:
            records = store.load(level, weight)
        except CuspformsError as e:
            item['status'] = 'missing' if not store.has(level, weight) else 'invalid'
            item['error'] = str(e)
            report[name] = False
        else:
            item['status'] = 'ok'
            item['orbits'] = [{'label': r.label, 'degree': r.degree, 'n_coeffs': r.n_max} for r in records]
            report[name] = True
        entries.append(item)
    verified = all(report.values())
    return JobResult(
        'validate_fixtures',
        {'root': str(store.root), 'fingerprint': store.fingerprint(wanted), 'fixtures': entries},
        report, verified, {'level': cfg.level, 'weight': cfg.weight}, cfg.seed,
        _failures(report), EXIT_OK if verified else EXIT_INPUT,
    )


RUNNERS = {
    'al_matrix': run_al_matrix,
    'sl2_table': run_sl2_table,
    'curve_model': run_curve_model,
    'pseudo_eigenvalue': run_pseudo_eigenvalue,
    'validate_fixtures': run_validate_fixtures,
}


def run(cfg: JobConfig) -> JobResult:
    return RUNNERS[cfg.command](cfg)
