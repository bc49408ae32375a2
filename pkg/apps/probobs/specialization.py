"""
Random specialization of an augmented model over Z_p

A SpecializationPoint fixes the initial value of every augmented component
and a random series u*(t) = sum u*_j t^j for every known input. Both engines
read the same point: the series engine integrates with u*(t), the symbolic
engine substitutes the jets u^(j)(0) = j! u*_j.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from django.conf import settings

from apps.core.exceptions import RetryBudgetExhaustedError, ValidationError
from apps.expressions.evaluation import FieldAlgebra, evaluate_many
from apps.expressions.rational import RationalForm, rational_normal_forms
from apps.kernel.field import FieldElement, PrimeField
from apps.kernel.sampling import FieldSampler
from apps.kernel.series import TruncatedSeries
from apps.systems.types import AugmentedModel, jet_symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpecializationPoint:
    field: PrimeField
    seed: int
    attempt: int
    initial: Mapping[str, FieldElement]
    input_series: Mapping[str, Tuple[FieldElement, ...]]

    @property
    def order(self) -> int:
        return min((len(c) for c in self.input_series.values()), default=0)

    def input_jet(self, name: str, level: int) -> FieldElement:
        """u^(level)(0) for a known input"""
        coeffs = self.input_series[name]
        if level >= len(coeffs):
            return 0
        return self.field.factorial(level) * coeffs[level] % self.field.p

    def jet_environment(self, levels: int) -> Dict[str, FieldElement]:
        """Initial values plus known-input jets of levels 0..levels-1"""
        env = dict(self.initial)
        for name in self.input_series:
            for level in range(levels):
                env[jet_symbol(name, level)] = self.input_jet(name, level)
        return env

    def series(self, name: str, order: int) -> TruncatedSeries:
        return TruncatedSeries(tuple(self.input_series[name]), self.field).truncate(order)


def draw_point(
    *,
    augmented: AugmentedModel,
    field: PrimeField,
    seed: int,
    order: int,
    sample_bound: int,
    attempt: int = 0,
    known_input_cap: Optional[int] = None
) -> SpecializationPoint:
    """
    Deterministic point for (seed, attempt)

    Initial values come from stream 0, the series of the i-th known input from
    stream i+1, so the drawn coefficients do not depend on each other's length.
    Coefficients above known_input_cap are zero.
    """
    sampler = FieldSampler(field=field, seed=seed, bound=sample_bound, attempt=attempt)
    initial = dict(zip(augmented.symbols, sampler.draw_many(augmented.dim)))
    series = {}
    for index, name in enumerate(augmented.known_inputs):
        stream = FieldSampler(field=field, seed=seed, bound=sample_bound, attempt=attempt, stream=index + 1)
        coeffs = stream.draw_many(order)
        if known_input_cap is not None:
            coeffs = [c if j <= known_input_cap else 0 for j, c in enumerate(coeffs)]
        series[name] = tuple(coeffs)
    return SpecializationPoint(field, seed, attempt, initial, series)


@dataclass(frozen=True)
class SpecializedSystem:
    """
    Augmented model at a specialization point.

    forms are the rational forms of the dynamics; their numerators are the
    polynomials P_i of x_i' * den_i - num_i = 0.
    """
    model: AugmentedModel
    point: SpecializationPoint
    forms: Tuple[RationalForm, ...]
    output_forms: Tuple[RationalForm, ...]
    order: int

    @property
    def field(self) -> PrimeField:
        return self.point.field

    @property
    def seed(self) -> int:
        return self.point.seed

    @property
    def retries(self) -> int:
        return self.point.attempt


def check_denominators(forms, point: SpecializationPoint) -> List[int]:
    """
    Indices of the forms whose denominator vanishes at the point
    """
    env = point.jet_environment(1)
    values = evaluate_many([f.denominator for f in forms], env, FieldAlgebra(point.field))
    return [i for i, v in enumerate(values) if v == 0]


def specialize(
    *,
    model: AugmentedModel,
    seed: int,
    prime: int,
    order: Optional[int] = None,
    sample_bound: Optional[int] = None,
    retry_budget: Optional[int] = None,
    known_input_cap: Optional[int] = None,
    first_attempt: int = 0
) -> SpecializedSystem:
    """
    Specialize parameters, initial states and known inputs at random

    Business rules:
    - Deterministic in (model, seed, prime)
    - Series order defaults to dim + 1 and must stay below the prime
    - A vanishing denominator forces a resample, up to the retry budget
    """
    field = PrimeField(prime)
    if order is None:
        order = model.dim + 1
    if sample_bound is None:
        sample_bound = getattr(settings, 'OBSRANK_SAMPLE_BOUND', 2**20)
    if retry_budget is None:
        retry_budget = getattr(settings, 'OBSRANK_RETRY_BUDGET', 3)
    if order >= prime:
        raise ValidationError(f"Truncation order {order} needs a prime larger than {order}")

    roots = list(model.dynamics) + list(model.outputs)
    all_forms = rational_normal_forms(roots)
    forms, output_forms = tuple(all_forms[:model.dim]), tuple(all_forms[model.dim:])

    for attempt in range(first_attempt, first_attempt + retry_budget + 1):
        point = draw_point(augmented=model, field=field, seed=seed, order=order, sample_bound=sample_bound,
                           attempt=attempt, known_input_cap=known_input_cap)
        vanishing = check_denominators(all_forms, point)
        if not vanishing:
            return SpecializedSystem(model, point, forms, output_forms, order)
        logger.info("Denominator of equation(s) %s vanishes at attempt %d for %s; resampling",
                    vanishing, attempt, model.source.name)
    raise RetryBudgetExhaustedError(
        f"Every specialization point for {model.source.name} hit a zero denominator "
        f"({retry_budget + 1} attempts, seed {seed})")
