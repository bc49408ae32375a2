"""
Rationalization services - turn non-rational models into rational ones

Two rewrites, applied in this order:
- non-integer exponents are rounded to the closest integer (ties to even)
- log/exp/sin/cos/tan nodes are replaced by Taylor polynomials in their argument
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import sympy
from django.conf import settings

from apps.core.exceptions import NonRationalError, RationalizationError, ValidationError
from apps.expressions import dag
from apps.expressions.dag import Node, NodeKind
from apps.expressions.evaluation import FractionAlgebra, evaluate
from apps.expressions.printing import format_number, to_text
from apps.expressions.rational import find_offenders
from apps.systems.services import with_model_parts
from apps.systems.types import OdeModel

logger = logging.getLogger(__name__)

# Largest denominator kept when a Taylor coefficient is irrational
COEFFICIENT_DENOMINATOR = 10**15


@dataclass(frozen=True)
class ExponentChange:
    location: str
    original: Fraction
    rounded: int

    @property
    def tie(self) -> bool:
        return self.original.denominator == 2

    def describe(self) -> str:
        text = f"exponent {format_number(self.original)} at {self.location} rounded to {self.rounded}"
        if self.tie:
            text += " (tie, rounded half to even)"
        return text


@dataclass(frozen=True)
class TaylorExpansion:
    location: str
    function: str
    center: Fraction
    order: int
    approximate: bool = False

    def describe(self) -> str:
        text = (f"{self.function} at {self.location} replaced by its order-{self.order} "
                f"Taylor polynomial about {format_number(self.center)}")
        if self.approximate:
            text += " (coefficients rounded to rationals)"
        return text


@dataclass
class RationalizationReport:
    exponent_changes: List[ExponentChange] = field(default_factory=list)
    expansions: List[TaylorExpansion] = field(default_factory=list)
    fallbacks: List[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not (self.exponent_changes or self.expansions)

    @property
    def caveats(self) -> List[str]:
        notes = [change.describe() for change in self.exponent_changes]
        notes += [expansion.describe() for expansion in self.expansions]
        notes += self.fallbacks
        if notes:
            notes.insert(0, "model was rationalized; conclusions hold for the approximated model")
        return notes


def _root_labels(model: OdeModel) -> List[str]:
    return [f"d({x})/dt" for x in model.states] + list(model.labels)


def _roots(model: OdeModel) -> List[Node]:
    return list(model.dynamics) + list(model.outputs)


def _rebuilt(model: OdeModel, roots: List[Node]) -> OdeModel:
    n_x = len(model.states)
    return with_model_parts(model=model, dynamics=tuple(roots[:n_x]), outputs=tuple(roots[n_x:]))


def round_exponents(*, model: OdeModel) -> Tuple[OdeModel, List[ExponentChange]]:
    """
    Round every non-integer exponent to the closest integer

    Business rules:
    - Ties go to the even neighbour (8.5 -> 8)
    - Integer exponents are left alone and produce no log entry
    """
    changes = []
    for root, label in zip(_roots(model), _root_labels(model)):
        for offender in find_offenders(root, label=label):
            if offender.kind != 'pow':
                continue
            original = Fraction(offender.detail.split()[-1])
            changes.append(ExponentChange(offender.path, original, round(original)))
    if not changes:
        return model, []

    def visit(node, children):
        if node.kind is NodeKind.POW and node.value.denominator != 1:
            return dag.power(children[0], round(node.value))
        return None

    for change in changes:
        log = logger.warning if change.tie else logger.info
        log("%s: %s", model.name, change.describe())
    return _rebuilt(model, dag.rewrite(_roots(model), visit)), changes


@lru_cache(maxsize=256)
def taylor_coefficients(function: str, center: Fraction, order: int) -> Tuple[Tuple[Fraction, ...], bool]:
    """
    Coefficients c_0..c_order of function(center + h) = sum c_k h^k

    Returns the coefficients and whether any of them had to be rounded.
    """
    z = sympy.Symbol('z')
    expression = getattr(sympy, function)(z)
    point = sympy.Rational(center.numerator, center.denominator)
    coefficients = []
    approximate = False
    for k in range(order + 1):
        value = sympy.diff(expression, z, k).subs(z, point) / sympy.factorial(k)
        if value.is_finite is not True:
            raise RationalizationError(f"{function} is singular at {format_number(center)}")
        if value.is_Rational:
            coefficients.append(Fraction(int(value.p), int(value.q)))
        else:
            approximate = True
            coefficients.append(Fraction(str(sympy.N(value, 30))).limit_denominator(COEFFICIENT_DENOMINATOR))
    return tuple(coefficients), approximate


def _usable(function: str, value: Optional[Fraction]) -> bool:
    if value is None:
        return False
    if function == 'log':
        return value > 0
    return True


def _argument_value(arg: Node, env: Mapping[str, Fraction]) -> Optional[Fraction]:
    try:
        return evaluate(arg, env, FractionAlgebra())
    except (ZeroDivisionError, NonRationalError, ValidationError):
        return None


def center_environment(*, model: OdeModel, center: Optional[Mapping[str, Fraction]] = None) -> Dict[str, Fraction]:
    """
    Expansion point for every declared name: explicit center, initial-condition hint, else 0
    """
    env = {name: Fraction(0) for name in model.declared_names}
    env.update(model.initial_conditions)
    for name, value in (center or {}).items():
        if name not in env:
            raise ValidationError(f"Expansion center names '{name}', which is not declared")
        env[name] = Fraction(value)
    return env


def taylor_substitute(
    *,
    model: OdeModel,
    center: Optional[Mapping[str, Fraction]] = None,
    order: Optional[int] = None
) -> Tuple[OdeModel, List[TaylorExpansion], List[str]]:
    """
    Replace each analytic function node by its Taylor polynomial in its argument

    Business rules:
    - The argument is expanded about its value at the center
    - A log argument that is not positive there (or cannot be evaluated) is
      expanded about 1 instead when the center came from defaults or hints;
      an explicit center that makes the expansion impossible is an error
    - Other functions fall back to 0 when their argument cannot be evaluated
    """
    if order is None:
        order = getattr(settings, 'OBSRANK_TAYLOR_ORDER', 4)
    if order < 1:
        raise ValidationError(f"Taylor order must be at least 1, got {order}")
    env = center_environment(model=model, center=center)
    explicit = bool(center)

    expansions: List[TaylorExpansion] = []
    fallbacks: List[str] = []
    failures: List[str] = []
    rewritten = []
    for root, label in zip(_roots(model), _root_labels(model)):
        def visit(node, children, label=label):
            if node.kind is not NodeKind.FUNC:
                return None
            name = node.value
            arg = children[0]
            point = _argument_value(arg, env)
            if not _usable(name, point):
                if explicit:
                    failures.append(f"{name}({to_text(arg)}) in {label} cannot be expanded at the given center")
                    return dag.ZERO
                fallback = Fraction(1) if name == 'log' else Fraction(0)
                fallbacks.append(f"{name} argument in {label} unusable at the center; expanded about "
                                 f"{format_number(fallback)}")
                point = fallback
            coefficients, approximate = taylor_coefficients(name, point, order)
            expansions.append(TaylorExpansion(label, name, point, order, approximate))

            shift = dag.sub(arg, dag.const(point))
            polynomial = dag.const(coefficients[-1])
            for c in reversed(coefficients[:-1]):
                polynomial = dag.add(dag.const(c), dag.mul(shift, polynomial))
            return polynomial

        rewritten.extend(dag.rewrite([root], visit))

    if failures:
        raise RationalizationError("; ".join(failures))
    for expansion in expansions:
        logger.info("%s: %s", model.name, expansion.describe())
    for note in fallbacks:
        logger.warning("%s: %s", model.name, note)
    return _rebuilt(model, rewritten), expansions, fallbacks


def rationalize_model(
    *,
    model: OdeModel,
    taylor_order: Optional[int] = None,
    center: Optional[Mapping[str, Fraction]] = None
) -> Tuple[OdeModel, RationalizationReport]:
    """
    Detect, round exponents, then Taylor-substitute

    Business rules:
    - A rational model comes back unchanged with an empty report
    - The result is rational or the call raises RationalizationError
    """
    report = RationalizationReport()
    offenders = [o for root, label in zip(_roots(model), _root_labels(model))
                 for o in find_offenders(root, label=label)]
    if not offenders:
        return model, report
    logger.info("Rationalizing %s: %d non-rational node(s)", model.name, len(offenders))

    model, report.exponent_changes = round_exponents(model=model)
    model, report.expansions, report.fallbacks = taylor_substitute(model=model, center=center, order=taylor_order)

    remaining = [o for root, label in zip(_roots(model), _root_labels(model))
                 for o in find_offenders(root, label=label)]
    if remaining:
        raise RationalizationError(
            "Model is still not rational: " + ", ".join(o.describe() for o in remaining))
    return model, report
