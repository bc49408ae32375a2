"""
ODE model types

OdeModel is the parsed model (states, parameters, known and unknown inputs,
dynamics, outputs). AugmentedModel is the observability problem built from
it: one component per unknown quantity, each with its own dynamics.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from apps.core.exceptions import ValidationError
from apps.expressions.dag import Node, free_symbols

JET_SEPARATOR = '__'


class Component(Enum):
    STATE = 'state'
    PARAMETER = 'parameter'
    INPUT = 'input'


# Verdict wording per component kind: (recovered, deficient)
VERDICTS = {
    Component.STATE: ('observable', 'unobservable'),
    Component.PARAMETER: ('identifiable', 'unidentifiable'),
    Component.INPUT: ('reconstructible', 'not-reconstructible'),
}


def jet_symbol(name: str, level: int) -> str:
    """Internal symbol of the level-th time derivative of an input"""
    return name if level == 0 else f"{name}{JET_SEPARATOR}{level}"


def jet_label(name: str, level: int) -> str:
    """Display label: F2, F2', F2'', F2^(3)"""
    if level <= 2:
        return name + "'" * level
    return f"{name}^({level})"


@dataclass(frozen=True)
class UnknownInput:
    name: str
    # Number of nonzero derivatives; None asks for an unbounded jet
    derivatives: Optional[int] = 0


@dataclass(frozen=True)
class OdeModel:
    name: str
    states: Tuple[str, ...]
    parameters: Tuple[str, ...]
    known_inputs: Tuple[str, ...]
    unknown_inputs: Tuple[UnknownInput, ...]
    dynamics: Tuple[Node, ...]
    outputs: Tuple[Node, ...]
    output_labels: Tuple[str, ...] = ()
    initial_conditions: Dict[str, Fraction] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.dynamics) != len(self.states):
            raise ValidationError(
                f"Model '{self.name}' has {len(self.states)} states but {len(self.dynamics)} equations")
        if not self.outputs:
            raise ValidationError(f"Model '{self.name}' needs at least one output")
        if self.output_labels and len(self.output_labels) != len(self.outputs):
            raise ValidationError("Every output needs a label when any output has one")

        seen = set()
        for name in self.declared_names:
            if name in seen:
                raise ValidationError(f"'{name}' is declared twice")
            if JET_SEPARATOR in name:
                raise ValidationError(f"'{name}' may not contain '{JET_SEPARATOR}'")
            seen.add(name)

        undeclared = free_symbols(self.dynamics + self.outputs) - seen
        if undeclared:
            raise ValidationError(f"Undeclared symbols in model '{self.name}': {', '.join(sorted(undeclared))}")

        for name in self.initial_conditions:
            if name not in self.states:
                raise ValidationError(f"Initial condition given for '{name}', which is not a state")

    @property
    def unknown_input_names(self) -> Tuple[str, ...]:
        return tuple(w.name for w in self.unknown_inputs)

    @property
    def declared_names(self) -> Tuple[str, ...]:
        return self.states + self.parameters + self.known_inputs + self.unknown_input_names

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.output_labels or tuple(f"y{i + 1}" for i in range(len(self.outputs)))

    def counts(self) -> Dict[str, int]:
        return {
            'states': len(self.states),
            'parameters': len(self.parameters),
            'known_inputs': len(self.known_inputs),
            'unknown_inputs': len(self.unknown_inputs),
            'outputs': len(self.outputs),
        }


@dataclass(frozen=True)
class AugmentedComponent:
    symbol: str
    label: str
    tag: Component
    level: int = 0

    @property
    def tag_name(self) -> str:
        if self.tag is Component.INPUT:
            return f"input-derivative-level-{self.level}"
        return self.tag.value


@dataclass(frozen=True)
class AugmentedModel:
    """
    Augmented state with its dynamics.

    components and dynamics are aligned. Parameters and unknown inputs that
    have not been augmented yet stay free symbols of the dynamics.
    """
    source: OdeModel
    components: Tuple[AugmentedComponent, ...]
    dynamics: Tuple[Node, ...]
    outputs: Tuple[Node, ...]
    parameters_augmented: bool = False
    input_caps: Optional[Mapping[str, int]] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(c.symbol for c in self.components)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(c.label for c in self.components)

    @property
    def known_inputs(self) -> Tuple[str, ...]:
        return self.source.known_inputs

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)
