"""
Model services - augmentation and variable fixing
"""

import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from django.conf import settings

from apps.core.exceptions import NotFoundError, ValidationError
from apps.expressions import dag
from apps.expressions.calculus import substitute_many

from .types import (
    AugmentedComponent,
    AugmentedModel,
    Component,
    OdeModel,
    UnknownInput,
    jet_label,
    jet_symbol,
)

logger = logging.getLogger(__name__)

ModelLike = Union[OdeModel, AugmentedModel]


def resolve_input_caps(
    *,
    model: OdeModel,
    overrides: Optional[Mapping[str, Optional[int]]] = None,
    infinite_cap: Optional[int] = None
) -> Tuple[Dict[str, int], List[str]]:
    """
    Finite derivative cap per unknown input, plus caveats for lowered requests

    Business rules:
    - Overrides must name declared unknown inputs
    - Caps are non-negative
    - An unbounded request (None) is lowered to the configured default cap
    """
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(model.unknown_input_names)
    if unknown:
        raise NotFoundError(f"Not an unknown input of '{model.name}': {', '.join(sorted(unknown))}")
    if infinite_cap is None:
        infinite_cap = getattr(settings, 'OBSRANK_DEFAULT_INFINITE_CAP', 3)

    caps = {}
    caveats = []
    for w in model.unknown_inputs:
        requested = overrides.get(w.name, w.derivatives)
        if requested is None:
            logger.warning("Unbounded derivative request for %s lowered to %d", w.name, infinite_cap)
            caveats.append(
                f"unknown input {w.name}: infinite nonzero derivatives lowered to {infinite_cap}; "
                f"raise the cap to check the conclusion")
            requested = infinite_cap
        if requested < 0:
            raise ValidationError(f"Derivative cap for {w.name} must be non-negative, got {requested}")
        caps[w.name] = requested
    return caps, caveats


def _assemble(source: OdeModel, *, with_parameters: bool, caps: Optional[Mapping[str, int]]) -> AugmentedModel:
    components = [AugmentedComponent(x, x, Component.STATE) for x in source.states]
    dynamics = list(source.dynamics)

    if with_parameters:
        for theta in source.parameters:
            components.append(AugmentedComponent(theta, theta, Component.PARAMETER))
            dynamics.append(dag.ZERO)

    if caps is not None:
        for w in source.unknown_inputs:
            cap = caps[w.name]
            for level in range(cap + 1):
                components.append(AugmentedComponent(
                    jet_symbol(w.name, level), jet_label(w.name, level), Component.INPUT, level))
                # The top of the jet is constant
                dynamics.append(dag.symbol(jet_symbol(w.name, level + 1)) if level < cap else dag.ZERO)

    return AugmentedModel(
        source=source,
        components=tuple(components),
        dynamics=tuple(dynamics),
        outputs=source.outputs,
        parameters_augmented=with_parameters,
        input_caps=dict(caps) if caps is not None else None,
    )


def _split(model: ModelLike) -> Tuple[OdeModel, bool, Optional[Mapping[str, int]]]:
    if isinstance(model, AugmentedModel):
        return model.source, model.parameters_augmented, model.input_caps
    return model, False, None


def augment_with_parameters(*, model: ModelLike) -> AugmentedModel:
    """
    Treat parameters as constant states: x~ = [x; theta], dynamics [f; 0]
    """
    source, _, caps = _split(model)
    augmented = _assemble(source, with_parameters=True, caps=caps)
    logger.debug("Augmented %s with %d parameters (dim %d)", source.name, len(source.parameters), augmented.dim)
    return augmented


def augment_with_unknown_inputs(*, model: ModelLike, caps: Optional[Mapping[str, int]] = None) -> AugmentedModel:
    """
    Append the jet w, w', ..., w^(cap) of every unknown input as states

    Business rules:
    - Level k has dynamics w^(k+1); the top level has dynamics 0
    - Occurrences of w in f and g are level 0
    - Components keep the order states, parameters, input jets
    """
    source, with_parameters, _ = _split(model)
    if caps is None:
        caps, _ = resolve_input_caps(model=source)
    missing = set(source.unknown_input_names) - set(caps)
    if missing:
        raise ValidationError(f"No derivative cap for {', '.join(sorted(missing))}")
    for name, cap in caps.items():
        if cap is None or cap < 0:
            raise ValidationError(f"Derivative cap for {name} must be a non-negative integer")
    augmented = _assemble(source, with_parameters=with_parameters, caps=caps)
    logger.debug("Augmented %s with input jets %s (dim %d)", source.name, dict(caps), augmented.dim)
    return augmented


def augment(*, model: OdeModel, caps: Mapping[str, int]) -> AugmentedModel:
    return augment_with_unknown_inputs(model=augment_with_parameters(model=model), caps=caps)


def fix_variables(*, model: OdeModel, bindings: Mapping[str, Union[int, Fraction]]) -> OdeModel:
    """
    Bind parameters to numeric values and drop them from the parameter list

    Business rules:
    - Every name must be a declared parameter
    """
    if not bindings:
        return model
    for name in bindings:
        if name in model.parameters:
            continue
        if name in model.declared_names:
            raise ValidationError(f"Only parameters can be fixed; '{name}' is not a parameter")
        raise NotFoundError(f"'{name}' is not declared in model '{model.name}'")

    values = {name: Fraction(value) for name, value in bindings.items()}
    substituted = substitute_many(list(model.dynamics) + list(model.outputs), values)
    n_x = len(model.states)
    logger.info("Fixed %s in %s", ', '.join(sorted(values)), model.name)
    return OdeModel(
        name=model.name,
        states=model.states,
        parameters=tuple(p for p in model.parameters if p not in values),
        known_inputs=model.known_inputs,
        unknown_inputs=model.unknown_inputs,
        dynamics=tuple(substituted[:n_x]),
        outputs=tuple(substituted[n_x:]),
        output_labels=model.output_labels,
        initial_conditions=dict(model.initial_conditions),
    )


def with_model_parts(
    *,
    model: OdeModel,
    dynamics: Tuple,
    outputs: Tuple,
    known_inputs: Optional[Tuple[str, ...]] = None,
    unknown_inputs: Optional[Tuple[UnknownInput, ...]] = None
) -> OdeModel:
    """
    Copy of model with replaced equations (and optionally input declarations)
    """
    return OdeModel(
        name=model.name,
        states=model.states,
        parameters=model.parameters,
        known_inputs=model.known_inputs if known_inputs is None else known_inputs,
        unknown_inputs=model.unknown_inputs if unknown_inputs is None else unknown_inputs,
        dynamics=tuple(dynamics),
        outputs=tuple(outputs),
        output_labels=model.output_labels,
        initial_conditions=dict(model.initial_conditions),
    )


def treat_inputs_as_unknown(*, model: OdeModel, names: Tuple[str, ...], derivatives: Optional[int] = 0) -> OdeModel:
    """
    Move known inputs to the unknown list with the given derivative cap
    """
    missing = set(names) - set(model.known_inputs)
    if missing:
        raise NotFoundError(f"Not a known input of '{model.name}': {', '.join(sorted(missing))}")
    moved = tuple(UnknownInput(name, derivatives) for name in model.known_inputs if name in names)
    return with_model_parts(
        model=model,
        dynamics=model.dynamics,
        outputs=model.outputs,
        known_inputs=tuple(u for u in model.known_inputs if u not in names),
        unknown_inputs=model.unknown_inputs + moved,
    )
