"""
Model preparation shared by both engines
"""

import logging
from dataclasses import dataclass, field
from typing import List

from apps.rationalize.services import RationalizationReport, rationalize_model
from apps.systems.services import augment, fix_variables, resolve_input_caps, treat_inputs_as_unknown
from apps.systems.types import AugmentedModel, OdeModel

from .options import AnalysisOptions

logger = logging.getLogger(__name__)


@dataclass
class PreparedModel:
    model: OdeModel
    augmented: AugmentedModel
    rationalization: RationalizationReport
    caveats: List[str] = field(default_factory=list)


def prepare_model(*, model: OdeModel, options: AnalysisOptions) -> PreparedModel:
    """
    Fix parameters, move inputs, rationalize and augment

    Business rules:
    - --unknown-derivs on a known input turns it into an unknown input
    - Unbounded derivative requests are lowered with a caveat
    - Every rationalization step becomes a caveat
    """
    model = fix_variables(model=model, bindings=options.fix)

    overrides = dict(options.unknown_derivs)
    for name in [n for n in overrides if n in model.known_inputs]:
        model = treat_inputs_as_unknown(model=model, names=(name,), derivatives=overrides.pop(name))
        logger.info("Treating known input %s of %s as unknown", name, model.name)

    model, rationalization = rationalize_model(
        model=model, taylor_order=options.taylor_order, center=options.taylor_center)
    caps, cap_caveats = resolve_input_caps(model=model, overrides=overrides)
    augmented = augment(model=model, caps=caps)
    logger.info("Prepared %s: %d augmented components, %d outputs", model.name, augmented.dim, augmented.n_outputs)
    return PreparedModel(
        model=model,
        augmented=augmented,
        rationalization=rationalization,
        caveats=rationalization.caveats + cap_caveats,
    )
