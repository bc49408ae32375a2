"""
Probabilistic observability test - series solution of the variational system
"""

import logging
import time
from dataclasses import dataclass
from typing import FrozenSet, Optional

from apps.core.exceptions import (
    AnalysisTimeout,
    BadSpecializationError,
    InconsistentSpecializationError,
    RetryBudgetExhaustedError,
)
from apps.kernel.field import confirmation_prime
from apps.kernel.matrices import FieldMatrix, deficient_columns, rank
from apps.pipeline.options import AnalysisOptions
from apps.pipeline.preparation import PreparedModel, prepare_model
from apps.pipeline.reports import (
    CERTIFIED,
    PROBABILISTIC,
    STATUS_DEFICIENT,
    STATUS_FISPO,
    STATUS_INCONCLUSIVE,
    AnalysisReport,
    build_verdicts,
)
from apps.systems.types import OdeModel

from .jacobian import assemble_jacobian
from .specialization import SpecializedSystem, specialize
from .variational import VariationalProgram, solve_variational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbObsPass:
    system: SpecializedSystem
    matrix: FieldMatrix
    rank: int
    deficient: FrozenSet[int]


def prob_obs_pass(
    *,
    prepared: PreparedModel,
    options: AnalysisOptions,
    seed: int,
    deadline: Optional[float] = None,
    program: Optional[VariationalProgram] = None
) -> ProbObsPass:
    """
    specialize -> solve -> assemble -> rank at one seed, resampling unlucky points
    """
    augmented = prepared.augmented
    order = options.truncation_order or augmented.dim + 1
    if program is None:
        program = VariationalProgram(augmented)
    first_attempt = 0
    while True:
        system = specialize(
            model=augmented,
            seed=seed,
            prime=options.prime,
            order=order,
            sample_bound=options.sample_bound,
            retry_budget=options.retry_budget - first_attempt,
            known_input_cap=options.known_input_cap,
            first_attempt=first_attempt,
        )
        try:
            solution = solve_variational(system, program=program, deadline=deadline)
            matrix = assemble_jacobian(solution, system)
            break
        except BadSpecializationError as exc:
            first_attempt = system.point.attempt + 1
            if first_attempt > options.retry_budget:
                raise RetryBudgetExhaustedError(
                    f"Series solution of {augmented.source.name} kept hitting zero divisors: {exc}")
            logger.info("Zero divisor during series solution (%s); resampling", exc)

    matrix_rank = rank(matrix)
    deficient = deficient_columns(matrix, augmented.dim) if matrix_rank < augmented.dim else frozenset()
    logger.info("%s at seed %d: rank %d of %d", augmented.source.name, seed, matrix_rank, augmented.dim)
    return ProbObsPass(system, matrix, matrix_rank, deficient)


def prob_obs_test(
    *,
    model: OdeModel,
    options: AnalysisOptions,
    deadline: Optional[float] = None
) -> AnalysisReport:
    """
    Classify every augmented component of model

    Business rules:
    - Transcendence degree = dim - rank
    - Full rank is certified at the sampled point
    - A deficient answer is repeated at seed + 1 over a second prime and must agree
    """
    started = time.monotonic()
    options = options.resolved()
    if deadline is None and options.time_budget:
        deadline = started + options.time_budget
    prepared = prepare_model(model=model, options=options)
    augmented = prepared.augmented
    order = options.truncation_order or augmented.dim + 1
    report = AnalysisReport(
        model_id=model.name,
        algorithm='probobs',
        status=STATUS_INCONCLUSIVE,
        stop_reason='timeout',
        dimension=augmented.dim,
        truncation_order=order,
        seed=options.seed,
        prime=options.prime,
        caveats=list(prepared.caveats),
    )

    program = VariationalProgram(augmented)
    try:
        first = prob_obs_pass(prepared=prepared, options=options, seed=options.seed,
                              deadline=deadline, program=program)
        if first.deficient:
            second_prime = confirmation_prime(options.prime, above=order)
            second = prob_obs_pass(prepared=prepared, options=options.with_changes(prime=second_prime),
                                   seed=options.seed + 1, deadline=deadline, program=program)
            if (second.rank, second.deficient) != (first.rank, first.deficient):
                raise InconsistentSpecializationError(
                    f"Seed {options.seed} mod {options.prime} and seed {options.seed + 1} mod {second_prime} "
                    f"disagree on {model.name}: rank {first.rank} vs {second.rank}")
            report.confirmation_prime = second_prime
    except AnalysisTimeout as exc:
        logger.warning("%s: %s", model.name, exc)
        report.caveats.append(str(exc))
        report.duration = time.monotonic() - started
        return report

    report.rank = first.rank
    report.transcendence_degree = augmented.dim - first.rank
    report.retries = first.system.retries
    if first.deficient:
        report.status = STATUS_DEFICIENT
        report.stop_reason = 'rank-deficient'
        report.verdicts = build_verdicts(augmented, first.deficient, PROBABILISTIC)
    else:
        report.status = STATUS_FISPO
        report.stop_reason = 'full-rank'
        report.verdicts = build_verdicts(augmented, frozenset(), CERTIFIED)
    report.duration = time.monotonic() - started
    logger.info("%s: %s under probobs (rank %d of %d) in %.3fs",
                model.name, report.status, first.rank, augmented.dim, report.duration)
    return report
