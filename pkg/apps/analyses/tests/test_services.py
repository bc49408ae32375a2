"""
Unit tests for analysis orchestration, recording and bench runs
"""

import csv
import io
import json
from pathlib import Path

import pytest

from apps.analyses import selectors, services
from apps.core.exceptions import NotFoundError, ValidationError
from apps.pipeline.options import AnalysisOptions
from apps.pipeline.reports import AnalysisReport, Verdict
from apps.systems.dsl import parse_model_text
from apps.systems.selectors import builtin_model, corpus_get, golden_get

CORPUS_DIR = Path(__file__).resolve().parents[3] / 'models'
GOLDENS = sorted((p.parent.name, p.name[:-len('.golden.json')]) for p in CORPUS_DIR.glob('*/*.golden.json'))
SLOW_GOLDENS = {('nfkb', '29-param')}

SUM_ONLY = """
states: x
parameters: a, b
dynamics:
    d(x)/dt = -(a + b)*x
outputs:
    y = x
"""

SINGLE = """
states: x
parameters: a
dynamics:
    d(x)/dt = -a*x
outputs:
    y = x
"""


def report_with(status, deficient=(), recovered=(), algorithm='probobs', stop_reason='rank-deficient'):
    verdicts = [Verdict(name, 'state', 'unobservable', 'probabilistic') for name in deficient]
    verdicts += [Verdict(name, 'parameter', 'identifiable', 'probabilistic') for name in recovered]
    return AnalysisReport(model_id='m', algorithm=algorithm, status=status, stop_reason=stop_reason,
                          verdicts=verdicts)


class TestAnalyze:
    """Test engine dispatch"""

    @pytest.mark.parametrize('algorithm', ['fispo', 'probobs'])
    def test_dispatch(self, algorithm):
        """Test the report comes from the requested engine"""
        model = parse_model_text(SUM_ONLY, name='sum')

        report = services.analyze(model=model, options=AnalysisOptions(algorithm=algorithm))

        assert report.algorithm == algorithm
        assert sorted(report.deficient) == ['a', 'b']

    def test_determinism(self):
        """Test a fixed seed and prime give identical reports"""
        model = builtin_model(name='hiv3')
        options = AnalysisOptions(seed=12)

        first = services.analyze(model=model, options=options)
        second = services.analyze(model=model, options=options)

        first.duration = second.duration = 0.0
        assert first == second


class TestGoldenCompare:
    """Test comparison against quoted classifications"""

    def test_status_pass(self):
        """Test a matching FISPO verdict passes"""
        outcome, _ = services.golden_compare(report=report_with('fispo'), golden={'status': 'fispo'})

        assert outcome == 'pass'

    def test_status_mismatch(self):
        """Test a different status fails"""
        outcome, detail = services.golden_compare(report=report_with('deficient', ['x']),
                                                  golden={'status': 'fispo'})

        assert outcome == 'fail'
        assert 'expected fispo' in detail

    def test_deficient_sets(self):
        """Test deficient sets compare exactly"""
        golden = {'status': 'deficient', 'deficient': ['b1', 'x1', 'x2']}

        assert services.golden_compare(report=report_with('deficient', ['x2', 'x1', 'b1']), golden=golden)[0] == 'pass'
        assert services.golden_compare(report=report_with('deficient', ['x1', 'x2']), golden=golden)[0] == 'fail'

    def test_recovered_sets(self):
        """Test recovered sets compare exactly"""
        golden = {'status': 'deficient', 'recovered': ['k4', 'k5']}

        report = report_with('deficient', ['x1'], ['k4', 'k5'])

        assert services.golden_compare(report=report, golden=golden)[0] == 'pass'

    def test_counts(self):
        """Test deficient counts per kind"""
        golden = {'status': 'deficient', 'counts': {'state': 2}}

        assert services.golden_compare(report=report_with('deficient', ['x1', 'x2']), golden=golden)[0] == 'pass'
        assert services.golden_compare(report=report_with('deficient', ['x1']), golden=golden)[0] == 'fail'

    def test_no_golden(self):
        """Test a missing golden is reported as such"""
        outcome, _ = services.golden_compare(report=report_with('fispo'), golden=None)

        assert outcome == 'no-golden'

    def test_inconclusive_is_timeout(self):
        """Test an inconclusive report is a timeout row"""
        report = report_with('inconclusive', stop_reason='budget', algorithm='fispo')

        assert services.golden_compare(report=report, golden={'status': 'fispo'}) == ('timeout', 'budget')

    def test_excused(self):
        """Test an excused algorithm may be inconclusive"""
        report = report_with('inconclusive', stop_reason='timeout', algorithm='fispo')

        outcome, _ = services.golden_compare(report=report, golden={'status': 'deficient', 'excused': ['fispo']})

        assert outcome == 'excused'


class TestGoldens:
    """Test every shipped golden under both engines"""

    @pytest.mark.parametrize('algorithm', ['fispo', 'probobs'])
    @pytest.mark.parametrize('name,variant', [
        pytest.param(name, variant, marks=pytest.mark.slow) if (name, variant) in SLOW_GOLDENS else (name, variant)
        for name, variant in GOLDENS
    ])
    def test_matches_golden(self, name, variant, algorithm):
        """Test the engine reproduces the quoted classification"""
        golden = golden_get(name=name, variant=variant)
        options = AnalysisOptions.from_settings(algorithm=algorithm, time_budget=120)

        report = services.analyze(model=builtin_model(name=name, variant=variant), options=options)

        outcome, detail = services.golden_compare(report=report, golden=golden)
        allowed = {'pass', 'excused'} if algorithm in golden.get('excused', ()) else {'pass'}
        assert outcome in allowed, detail

    def test_every_golden_is_collected(self):
        """Test the shipped goldens are all parametrized"""
        assert len(GOLDENS) == 13
        assert GOLDENS == [(e.name, e.variant) for e in selectors.suite_entries(suite='golden')]


class TestRationalizedModel:
    """Test the beta-IG model, which needs its exponents rounded"""

    def test_both_engines_agree_and_probobs_is_faster(self):
        """Test both engines find the same deficient set and probobs finishes first"""
        model = builtin_model(name='big', variant='known-input')

        fispo = services.analyze(model=model, options=AnalysisOptions.from_settings(algorithm='fispo', time_budget=120))
        probobs = services.analyze(model=model, options=AnalysisOptions.from_settings(algorithm='probobs', time_budget=120))

        assert probobs.status == 'deficient'
        assert probobs.stop_reason == 'rank-deficient'
        assert fispo.status == 'deficient'
        assert set(probobs.deficient) == set(fispo.deficient) == {'I', 'p', 'si'}
        assert probobs.duration < fispo.duration


class TestSuites:
    """Test bench suite resolution"""

    def test_empty_suite(self):
        """Test an empty suite has no entries"""
        assert selectors.suite_entries(suite='') == []

    def test_c2m_suite(self):
        """Test the C2M suite holds its five variants"""
        assert len(selectors.suite_entries(suite='c2m')) == 5

    def test_golden_suite(self):
        """Test the golden suite only holds entries with goldens"""
        entries = selectors.suite_entries(suite='golden')

        assert entries
        assert all(e.has_golden for e in entries)

    def test_comma_list(self):
        """Test a comma list of references"""
        entries = selectors.suite_entries(suite='hiv3, 2dof/f2-unknown-0')

        assert [e.key for e in entries] == ['hiv3/default', '2dof/f2-unknown-0']

    def test_unknown_reference(self):
        """Test an unknown model in a suite is an error"""
        with pytest.raises(NotFoundError):
            selectors.suite_entries(suite='nope/default')


class TestBench:
    """Test bench runs"""

    def test_empty(self):
        """Test an empty suite gives an empty table"""
        assert services.bench_run(entries=[], algorithms=('fispo', 'probobs')) == []

    def test_parse_algorithms(self):
        """Test 'both' and single names"""
        assert services.parse_algorithms('both') == ('fispo', 'probobs')
        assert services.parse_algorithms('fispo') == ('fispo',)
        with pytest.raises(ValidationError):
            services.parse_algorithms('orc-df')

    def test_c2m_rows(self):
        """Test every C2M cell runs and the known-input variant passes"""
        entries = selectors.suite_entries(suite='c2m')

        rows = services.bench_run(entries=entries, algorithms=('fispo', 'probobs'))

        assert [(r.model, r.algorithm) for r in rows] == [(e.key, a) for e in entries for a in ('fispo', 'probobs')]
        assert all(r.outcome in ('pass', 'no-golden') for r in rows)
        assert {r.outcome for r in rows if r.model == 'c2m/known-input'} == {'pass'}

    def test_workers_do_not_change_rows(self):
        """Test rows are the same with one or several workers"""
        entries = selectors.suite_entries(suite='hiv3,c2m/known-input,sirs')

        serial = services.bench_run(entries=entries, algorithms=('probobs',), workers=1)
        parallel = services.bench_run(entries=entries, algorithms=('probobs',), workers=3)

        strip = [(r.model, r.outcome, r.rank, r.deficient) for r in serial]
        assert strip == [(r.model, r.outcome, r.rank, r.deficient) for r in parallel]

    def test_tiny_budget_is_a_row(self):
        """Test running out of node budget gives a timeout row, not a crash"""
        entries = [corpus_get(name='c2m', variant='known-input')]
        options = AnalysisOptions.from_settings(node_budget=10)

        rows = services.bench_run(entries=entries, algorithms=('fispo',), options=options)

        assert rows[0].outcome == 'timeout'
        assert rows[0].detail == 'budget'

    def test_error_is_a_row(self, tmp_path, settings):
        """Test a broken model file gives an error row"""
        (tmp_path / 'broken').mkdir()
        (tmp_path / 'broken' / 'default.model').write_text('states: x\ndynamics:\n    d(x)/dt = y\n')
        settings.OBSRANK_CORPUS_DIR = tmp_path

        rows = services.bench_run(entries=selectors.suite_entries(suite='all'), algorithms=('probobs',))

        assert len(rows) == 1
        assert rows[0].outcome == 'error'

    def test_exports(self):
        """Test the JSON and CSV tables carry every row"""
        rows = [services.BenchRow('c2m/known-input', 'fispo', 'pass', 'fispo', 6, 6, [], 0.5, 'fispo'),
                services.BenchRow('sirs/default', 'probobs', 'pass', 'deficient', 8, 11, ['b1', 'x1'], 1.0, '')]

        table = json.loads(services.bench_to_json(rows))
        records = list(csv.DictReader(io.StringIO(services.bench_to_csv(rows))))

        assert [r['model'] for r in table] == ['c2m/known-input', 'sirs/default']
        assert records[1]['deficient'] == 'b1 x1'
        assert records[0]['duration'] == '0.500'


@pytest.mark.django_db
class TestAnalysisRecord:
    """Test storing reports"""

    def test_record(self):
        """Test a report is stored with its summary fields"""
        options = AnalysisOptions.from_settings(algorithm='probobs')
        report = services.analyze(model=builtin_model(name='c2m', variant='known-input'), options=options)

        run = services.analysis_record(report=report, options=options)

        stored = selectors.analysis_run_get_by_id(run_id=run.id)
        assert stored.status == 'fispo'
        assert stored.rank == 6
        assert int(stored.prime) == report.prime
        assert AnalysisReport.from_dict(stored.report) == report

    def test_delete(self):
        """Test deleting a run"""
        options = AnalysisOptions.from_settings()
        report = services.analyze(model=parse_model_text(SUM_ONLY, name='sum'), options=options)
        run = services.analysis_record(report=report, options=options)

        services.analysis_run_delete(run_id=run.id)

        assert selectors.analysis_run_get_by_id(run_id=run.id) is None

    def test_delete_missing(self):
        """Test deleting an unknown run"""
        with pytest.raises(NotFoundError):
            services.analysis_run_delete(run_id=999)

    def test_list_filters(self):
        """Test filtering stored runs by status"""
        options = AnalysisOptions.from_settings()
        for text, name in ((SUM_ONLY, 'sum'), (SINGLE, 'single')):
            report = services.analyze(model=parse_model_text(text, name=name), options=options)
            services.analysis_record(report=report, options=options)

        assert [r.model_id for r in selectors.analysis_run_list(filters={'status': 'deficient'})] == ['sum']
        assert selectors.analysis_run_list().count() == 2

    def test_statistics(self):
        """Test run counts per algorithm and status for one model only"""
        for algorithm in ('fispo', 'probobs', 'probobs'):
            options = AnalysisOptions.from_settings(algorithm=algorithm)
            report = services.analyze(model=parse_model_text(SUM_ONLY, name='sum'), options=options)
            services.analysis_record(report=report, options=options)
        options = AnalysisOptions.from_settings()
        report = services.analyze(model=parse_model_text(SINGLE, name='single'), options=options)
        services.analysis_record(report=report, options=options)

        statistics = selectors.analysis_run_statistics(model_id='sum')

        assert statistics == {
            'model_id': 'sum',
            'runs': [
                {'algorithm': 'fispo', 'status': 'deficient', 'runs': 1},
                {'algorithm': 'probobs', 'status': 'deficient', 'runs': 2},
            ],
        }

    def test_statistics_unknown_model(self):
        """Test a model without runs has no counts"""
        assert selectors.analysis_run_statistics(model_id='nope') == {'model_id': 'nope', 'runs': []}
