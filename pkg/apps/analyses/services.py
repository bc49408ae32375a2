"""
Analysis services - orchestration, recording and benchmark runs
"""

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from django.conf import settings
from django.db import transaction

from apps.core.exceptions import AnalysisError, NotFoundError, ValidationError
from apps.fispo.services import fispo_test
from apps.pipeline.options import ALGORITHMS, AnalysisOptions
from apps.pipeline.reports import STATUS_INCONCLUSIVE, AnalysisReport
from apps.probobs.services import prob_obs_test
from apps.systems.dsl import parse_model_file
from apps.systems.selectors import CorpusEntry, golden_get
from apps.systems.types import OdeModel

from .models import AnalysisRun
from .selectors import analysis_run_get_by_id

logger = logging.getLogger(__name__)

ENGINES = {
    'fispo': fispo_test,
    'probobs': prob_obs_test,
}

# Bench outcomes
PASS = 'pass'
FAIL = 'fail'
TIMEOUT = 'timeout'
NO_GOLDEN = 'no-golden'
EXCUSED = 'excused'
ERROR = 'error'


def analyze(*, model: OdeModel, options: AnalysisOptions) -> AnalysisReport:
    """
    Run the engine named by options.algorithm
    """
    logger.info("Analyzing %s with %s", model.name, options.algorithm)
    return ENGINES[options.algorithm](model=model, options=options)


@transaction.atomic
def analysis_record(*, report: AnalysisReport, options: AnalysisOptions) -> AnalysisRun:
    """
    Store a finished report
    """
    return AnalysisRun.objects.create(
        model_id=report.model_id,
        algorithm=report.algorithm,
        status=report.status,
        stop_reason=report.stop_reason,
        rank=report.rank,
        dimension=report.dimension,
        seed=report.seed,
        prime=report.prime,
        duration=report.duration,
        options=json.loads(json.dumps(options.to_dict())),
        report=report.to_dict(),
    )


@transaction.atomic
def analysis_run_delete(*, run_id: int) -> None:
    run = analysis_run_get_by_id(run_id=run_id)
    if not run:
        raise NotFoundError("Analysis run not found")
    run.delete()


def parse_algorithms(text: str) -> Tuple[str, ...]:
    """
    'both', 'fispo', 'probobs' or a comma list of those
    """
    if text.strip() == 'both':
        return ALGORITHMS
    names = tuple(a.strip() for a in text.split(',') if a.strip())
    unknown = [a for a in names if a not in ALGORITHMS]
    if unknown or not names:
        raise ValidationError(f"Unknown algorithm(s) '{text}'", hint="fispo, probobs or both")
    return names


def golden_compare(*, report: AnalysisReport, golden: Optional[dict]) -> Tuple[str, str]:
    """
    Outcome of a report against a quoted classification, with a short detail

    Business rules:
    - An inconclusive report is a timeout, or excused when the golden
      excuses the algorithm
    - 'deficient' and 'recovered' compare as exact sets
    - 'counts' compares the deficient components per kind
    """
    if report.status == STATUS_INCONCLUSIVE:
        if golden and report.algorithm in golden.get('excused', ()):
            return EXCUSED, f"{report.stop_reason}, excused for {report.algorithm}"
        return TIMEOUT, report.stop_reason
    if golden is None:
        return NO_GOLDEN, report.status
    if report.status != golden['status']:
        return FAIL, f"status {report.status}, expected {golden['status']}"
    if 'deficient' in golden and set(report.deficient) != set(golden['deficient']):
        return FAIL, f"deficient {sorted(report.deficient)}, expected {sorted(golden['deficient'])}"
    if 'recovered' in golden and set(report.recovered) != set(golden['recovered']):
        return FAIL, f"recovered {sorted(report.recovered)}, expected {sorted(golden['recovered'])}"
    if 'counts' in golden and report.deficient_counts() != golden['counts']:
        return FAIL, f"counts {report.deficient_counts()}, expected {golden['counts']}"
    return PASS, report.status


@dataclass
class BenchRow:
    model: str
    algorithm: str
    outcome: str
    status: Optional[str] = None
    rank: Optional[int] = None
    dimension: Optional[int] = None
    deficient: List[str] = field(default_factory=list)
    duration: float = 0.0
    detail: str = ''


def bench_cell(*, entry: CorpusEntry, algorithm: str, options: AnalysisOptions) -> BenchRow:
    """
    One model x algorithm cell; failures become rows
    """
    try:
        model = parse_model_file(entry.path, name=entry.key)
        report = analyze(model=model, options=options.with_changes(algorithm=algorithm))
        outcome, detail = golden_compare(report=report, golden=golden_get(name=entry.name, variant=entry.variant))
    except AnalysisError as exc:
        logger.warning("Bench cell %s/%s failed: %s", entry.key, algorithm, exc)
        return BenchRow(entry.key, algorithm, ERROR, detail=str(exc))
    logger.info("Bench cell %s/%s: %s (%.3fs)", entry.key, algorithm, outcome, report.duration)
    return BenchRow(
        model=entry.key,
        algorithm=algorithm,
        outcome=outcome,
        status=report.status,
        rank=report.rank,
        dimension=report.dimension,
        deficient=report.deficient,
        duration=report.duration,
        detail=detail,
    )


def bench_run(
    *,
    entries: Sequence[CorpusEntry],
    algorithms: Iterable[str],
    budget: Optional[float] = None,
    workers: Optional[int] = None,
    options: Optional[AnalysisOptions] = None
) -> List[BenchRow]:
    """
    Run every entry under every algorithm

    Business rules:
    - Rows come out in entry order, then algorithm order, whatever the
      number of workers
    - budget is the wall-clock budget of a single cell
    """
    if options is None:
        options = AnalysisOptions.from_settings()
    if budget is not None:
        options = options.with_changes(time_budget=budget)
    if workers is None:
        workers = getattr(settings, 'OBSRANK_BENCH_WORKERS', 1)
    if workers < 1:
        raise ValidationError(f"Need at least one worker, got {workers}")
    cells = [(entry, algorithm) for entry in entries for algorithm in algorithms]
    if not cells:
        return []

    def run(cell):
        entry, algorithm = cell
        return bench_cell(entry=entry, algorithm=algorithm, options=options)

    if workers == 1:
        return [run(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, cells))


BENCH_COLUMNS = ('model', 'algorithm', 'outcome', 'status', 'rank', 'dimension', 'deficient', 'duration', 'detail')


def bench_to_json(rows: Sequence[BenchRow]) -> str:
    return json.dumps([asdict(row) for row in rows], indent=2)


def bench_to_csv(rows: Sequence[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        data = asdict(row)
        data['deficient'] = ' '.join(row.deficient)
        data['duration'] = f"{row.duration:.3f}"
        writer.writerow([data[column] for column in BENCH_COLUMNS])
    return buffer.getvalue()


def bench_to_text(rows: Sequence[BenchRow]) -> str:
    if not rows:
        return "no bench cells\n"
    width = max(len(row.model) for row in rows)
    lines = []
    for row in rows:
        lines.append(f"{row.model:<{width}}  {row.algorithm:<8} {row.outcome:<10} "
                     f"{row.duration:8.3f}s  {row.detail}")
    return '\n'.join(lines) + '\n'
