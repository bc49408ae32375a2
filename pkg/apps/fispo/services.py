"""
FISPO services - symbolic observability rank test with early termination
"""

import logging
import time
from typing import FrozenSet, List, Optional, Tuple

from apps.core.exceptions import (
    AnalysisTimeout,
    BadSpecializationError,
    ExpressionBudgetExceeded,
    InconsistentSpecializationError,
    RetryBudgetExhaustedError,
)
from apps.kernel.field import confirmation_prime
from apps.kernel.matrices import FieldMatrix, deficient_columns, rank
from apps.pipeline.options import AnalysisOptions
from apps.pipeline.preparation import prepare_model
from apps.pipeline.reports import (
    CERTIFIED,
    PROBABILISTIC,
    STATUS_DEFICIENT,
    STATUS_FISPO,
    STATUS_INCONCLUSIVE,
    AnalysisReport,
    build_verdicts,
)
from apps.probobs.specialization import SpecializationPoint, specialize
from apps.systems.types import AugmentedModel, OdeModel

from .lie import SymbolicObservabilityMatrix

logger = logging.getLogger(__name__)


def minimum_lie_order(*, dim: int, n_outputs: int) -> int:
    """
    n_d = ceil((dim - n_y) / n_y): fewer blocks cannot fill dim columns
    """
    return max(0, -(-(dim - n_outputs) // n_outputs))


def _draw(augmented: AugmentedModel, options: AnalysisOptions, seed: int, first_attempt: int) -> SpecializationPoint:
    return specialize(
        model=augmented,
        seed=seed,
        prime=options.prime,
        order=options.max_lie + 1,
        sample_bound=options.sample_bound,
        retry_budget=max(options.retry_budget - first_attempt, 0),
        known_input_cap=options.known_input_cap,
        first_attempt=first_attempt,
    ).point


class _RankTracker:
    """
    Specialized rows of the symbolic matrix at one point, block by block
    """

    def __init__(self, matrix: SymbolicObservabilityMatrix, options: AnalysisOptions, seed: int):
        self.matrix = matrix
        self.options = options
        self.seed = seed
        self.point = _draw(matrix.model, options, seed, 0)
        self.rows: List[List[int]] = []

    def _resample(self, exc: Exception) -> None:
        attempt = self.point.attempt + 1
        if attempt > self.options.retry_budget:
            raise RetryBudgetExhaustedError(f"Lie rows of {self.matrix.model.source.name} kept hitting "
                                            f"zero divisors: {exc}")
        logger.info("Zero divisor in Lie rows (%s); resampling", exc)
        self.point = _draw(self.matrix.model, self.options, self.seed, attempt)
        self.rows = []

    def numeric(self) -> FieldMatrix:
        while True:
            try:
                done = len(self.rows) // self.matrix.model.n_outputs
                for k in range(done, self.matrix.orders + 1):
                    self.rows.extend(self.matrix.specialize_block(k, self.point))
                return FieldMatrix.from_rows(self.point.field, self.rows, cols=self.matrix.model.dim)
            except BadSpecializationError as exc:
                self._resample(exc)


def _classify(numeric: FieldMatrix, dim: int) -> Tuple[int, FrozenSet[int]]:
    r = rank(numeric)
    return r, (deficient_columns(numeric, dim) if r < dim else frozenset())


def fispo_test(
    *,
    model: OdeModel,
    options: AnalysisOptions,
    deadline: Optional[float] = None
) -> AnalysisReport:
    """
    Build Lie-derivative blocks until the rank verdict is settled

    Business rules:
    - The first rank check happens after n_d derivatives (override: min_lie)
    - Stop at full rank, when one more block adds no rank, or at max_lie
    - Deficient components are those whose column can go without a rank drop
    - The verdict is repeated at seed + 1 over a second prime and must agree
    - Outgrowing the node budget or the deadline gives an inconclusive report
    """
    started = time.monotonic()
    options = options.resolved()
    if deadline is None and options.time_budget:
        deadline = started + options.time_budget
    prepared = prepare_model(model=model, options=options)
    augmented = prepared.augmented
    dim = augmented.dim
    n_d = options.min_lie if options.min_lie is not None else minimum_lie_order(
        dim=dim, n_outputs=augmented.n_outputs)
    n_d = min(n_d, options.max_lie)

    report = AnalysisReport(
        model_id=model.name,
        algorithm='fispo',
        status=STATUS_INCONCLUSIVE,
        stop_reason='timeout',
        dimension=dim,
        seed=options.seed,
        prime=options.prime,
        caveats=list(prepared.caveats),
    )

    try:
        matrix = SymbolicObservabilityMatrix(
            augmented, known_input_cap=options.known_input_cap,
            node_budget=options.node_budget, deadline=deadline)
        while matrix.orders < n_d:
            matrix.extend()
        tracker = _RankTracker(matrix, options, options.seed)
        current = rank(tracker.numeric())
        logger.info("%s: rank %d of %d after %d Lie orders", model.name, current, dim, matrix.orders)
        previous = None
        while True:
            if current == dim:
                stop_reason = 'full-rank'
                break
            if previous is not None and current == previous:
                stop_reason = 'stalled'
                break
            if matrix.orders >= options.max_lie:
                stop_reason = 'max-order'
                break
            matrix.extend()
            previous = current
            current = rank(tracker.numeric())
            logger.info("%s: rank %d of %d after %d Lie orders", model.name, current, dim, matrix.orders)

        numeric = tracker.numeric()
        found_rank, deficient = _classify(numeric, dim)
        second_prime = confirmation_prime(options.prime, above=options.max_lie + 1)
        confirming = _RankTracker(matrix, options.with_changes(prime=second_prime), options.seed + 1)
        if _classify(confirming.numeric(), dim) != (found_rank, deficient):
            raise InconsistentSpecializationError(
                f"Seed {options.seed} mod {options.prime} and seed {options.seed + 1} mod {second_prime} "
                f"disagree on the observability matrix of {model.name}")
    except ExpressionBudgetExceeded as exc:
        logger.warning("%s: %s", model.name, exc)
        report.stop_reason = 'budget'
        report.caveats.append(str(exc))
        report.duration = time.monotonic() - started
        return report
    except AnalysisTimeout as exc:
        logger.warning("%s: %s", model.name, exc)
        report.caveats.append(str(exc))
        report.duration = time.monotonic() - started
        return report

    report.stop_reason = stop_reason
    report.rank = found_rank
    report.transcendence_degree = dim - found_rank
    report.lie_orders = matrix.orders
    report.retries = tracker.point.attempt
    report.confirmation_prime = second_prime
    if deficient:
        report.status = STATUS_DEFICIENT
        report.verdicts = build_verdicts(augmented, deficient, PROBABILISTIC)
        if stop_reason == 'max-order':
            report.caveats.append(f"rank had not settled at the maximum Lie order {options.max_lie}; "
                                  f"raise --max-lie to check the deficient components")
    else:
        report.status = STATUS_FISPO
        report.verdicts = build_verdicts(augmented, frozenset(), CERTIFIED)
    report.duration = time.monotonic() - started
    logger.info("%s: %s under fispo (rank %d of %d, %d Lie orders) in %.3fs",
                model.name, report.status, found_rank, dim, matrix.orders, report.duration)
    return report
