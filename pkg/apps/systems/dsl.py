"""
Model file reader

A model file is a list of sections, each opened by a `name:` header line:

    states: x1, x2
    parameters: k1e, k12, k21, b
    known_inputs: u
    unknown_inputs: w[3], v[inf]
    constants:
        m1 = 1.5
    dynamics:
        d(x1)/dt = -(k1e+k12)*x1 + k21*x2 + b*u
        d(x2)/dt = k12*x1 - k21*x2
    outputs:
        y1 = x1
    initial_conditions:
        x1 = 1

Declaration sections take comma-separated names, inline or on the lines
below the header. Everything after `#` is a comment.
"""

import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from apps.core.exceptions import ModelSyntaxError, ValidationError
from apps.expressions.parser import parse_expression
from apps.expressions.printing import format_number, to_text

from .types import OdeModel, UnknownInput

DECLARATION_SECTIONS = ('states', 'parameters', 'known_inputs', 'unknown_inputs')
ENTRY_SECTIONS = ('constants', 'dynamics', 'outputs', 'initial_conditions')

_HEADER = re.compile(r'^(?P<section>[a-z_]+)\s*:(?P<rest>.*)$')
_IDENTIFIER = re.compile(r'^[A-Za-z_][A-Za-z_0-9]*$')
_UNKNOWN_INPUT = re.compile(r'^(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*(?:\[\s*(?P<cap>\d+|inf)\s*\])?$')
_EQUATION = re.compile(r'^d\(\s*(?P<state>[A-Za-z_][A-Za-z_0-9]*)\s*\)\s*/\s*dt\s*=(?P<rhs>.*)$')
_ASSIGNMENT = re.compile(r'^(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*=(?P<rhs>.*)$')

# (line number, column of the first character, text)
Line = Tuple[int, int, str]


def _strip(raw: str) -> str:
    return raw.split('#', 1)[0].rstrip()


def _split_sections(text: str) -> Dict[str, List[Line]]:
    sections: Dict[str, List[Line]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        header = _HEADER.match(line.strip())
        if header and header.group('section') in DECLARATION_SECTIONS + ENTRY_SECTIONS:
            current = header.group('section')
            if current in sections:
                raise ModelSyntaxError(f"section '{current}' appears twice", line=number, column=indent + 1)
            sections[current] = []
            rest = header.group('rest')
            if rest.strip():
                offset = indent + len(current) + 1 + (len(rest) - len(rest.lstrip()))
                sections[current].append((number, offset, rest.strip()))
            continue
        if header and current is None:
            raise ModelSyntaxError(f"unknown section '{header.group('section')}'", line=number, column=indent + 1)
        if current is None:
            raise ModelSyntaxError("content before the first section header", line=number, column=indent + 1)
        sections[current].append((number, indent, line.strip()))
    return sections


def _names(lines: List[Line]) -> List[Tuple[str, int, int]]:
    names = []
    for number, offset, text in lines:
        position = 0
        items = text.split(',')
        for index, item in enumerate(items):
            stripped = item.strip()
            column = offset + position + (len(item) - len(item.lstrip())) + 1
            position += len(item) + 1
            if not stripped:
                # A trailing comma continues the list on the next line
                if index == len(items) - 1 and index > 0:
                    continue
                raise ModelSyntaxError("empty name in list", line=number, column=column)
            names.append((stripped, number, column))
    return names


def _declare(lines: List[Line], seen: Dict[str, int]) -> Tuple[str, ...]:
    declared = []
    for name, number, column in _names(lines):
        if not _IDENTIFIER.match(name):
            raise ModelSyntaxError(f"'{name}' is not a valid name", line=number, column=column)
        if name in seen:
            raise ModelSyntaxError(f"'{name}' already declared on line {seen[name]}", line=number, column=column)
        seen[name] = number
        declared.append(name)
    return tuple(declared)


def _declare_unknown_inputs(lines: List[Line], seen: Dict[str, int]) -> Tuple[UnknownInput, ...]:
    inputs = []
    for item, number, column in _names(lines):
        match = _UNKNOWN_INPUT.match(item)
        if not match:
            raise ModelSyntaxError(f"expected name or name[k], found '{item}'", line=number, column=column)
        name = match.group('name')
        if name in seen:
            raise ModelSyntaxError(f"'{name}' already declared on line {seen[name]}", line=number, column=column)
        seen[name] = number
        cap = match.group('cap')
        inputs.append(UnknownInput(name, None if cap == 'inf' else int(cap or 0)))
    return tuple(inputs)


def _number(text: str, constants: Dict[str, Fraction], *, number: int, column: int) -> Fraction:
    node = parse_expression(text, (), constants=constants, line=number, column_offset=column)
    if not node.is_const:
        raise ModelSyntaxError("expected a numeric value", line=number, column=column + 1)
    return node.value


def _assignment(line: Line, pattern=_ASSIGNMENT):
    number, offset, text = line
    match = pattern.match(text)
    if not match:
        return None
    rhs = match.group('rhs')
    column = offset + match.start('rhs') + (len(rhs) - len(rhs.lstrip()))
    return match, rhs.strip(), column


def parse_model_text(text: str, *, name: str = 'model') -> OdeModel:
    """
    Parse model DSL text into an OdeModel
    """
    sections = _split_sections(text)
    seen: Dict[str, int] = {}
    states = _declare(sections.get('states', []), seen)
    parameters = _declare(sections.get('parameters', []), seen)
    known_inputs = _declare(sections.get('known_inputs', []), seen)
    unknown_inputs = _declare_unknown_inputs(sections.get('unknown_inputs', []), seen)
    if not states:
        raise ValidationError(f"Model '{name}' declares no states")

    constants: Dict[str, Fraction] = {}
    for line in sections.get('constants', []):
        parsed = _assignment(line)
        if parsed is None:
            raise ModelSyntaxError("expected 'name = value'", line=line[0], column=line[1] + 1)
        match, rhs, column = parsed
        constant = match.group('name')
        if constant in seen or constant in constants:
            raise ModelSyntaxError(f"'{constant}' already declared", line=line[0], column=line[1] + 1)
        constants[constant] = _number(rhs, constants, number=line[0], column=column)

    symbols = set(seen)
    equations = {}
    for line in sections.get('dynamics', []):
        parsed = _assignment(line, _EQUATION)
        if parsed is None:
            raise ModelSyntaxError("expected 'd(state)/dt = expression'", line=line[0], column=line[1] + 1)
        match, rhs, column = parsed
        state = match.group('state')
        if state not in states:
            raise ModelSyntaxError(f"'{state}' is not a declared state", line=line[0],
                                   column=line[1] + match.start('state') + 1)
        if state in equations:
            raise ModelSyntaxError(f"second equation for '{state}'", line=line[0], column=line[1] + 1)
        equations[state] = parse_expression(rhs, symbols, constants=constants, line=line[0], column_offset=column)
    missing = [x for x in states if x not in equations]
    if missing:
        raise ValidationError(f"No equation for state(s) {', '.join(missing)}")

    outputs, labels = [], []
    for line in sections.get('outputs', []):
        parsed = _assignment(line)
        if parsed is not None and parsed[0].group('name') not in symbols | set(constants):
            match, rhs, column = parsed
            labels.append(match.group('name'))
        else:
            rhs, column = line[2], line[1]
            labels.append(None)
        outputs.append(parse_expression(rhs, symbols, constants=constants, line=line[0], column_offset=column))
    if not outputs:
        raise ValidationError(f"Model '{name}' needs at least one output")
    if any(labels):
        labels = [label or f"y{i + 1}" for i, label in enumerate(labels)]
    else:
        labels = []

    initial_conditions = {}
    for line in sections.get('initial_conditions', []):
        parsed = _assignment(line)
        if parsed is None or parsed[0].group('name') not in states:
            raise ModelSyntaxError("expected 'state = value'", line=line[0], column=line[1] + 1)
        match, rhs, column = parsed
        initial_conditions[match.group('name')] = _number(rhs, constants, number=line[0], column=column)

    return OdeModel(
        name=name,
        states=states,
        parameters=parameters,
        known_inputs=known_inputs,
        unknown_inputs=unknown_inputs,
        dynamics=tuple(equations[x] for x in states),
        outputs=tuple(outputs),
        output_labels=tuple(labels),
        initial_conditions=initial_conditions,
    )


def parse_model_file(path, *, name: Optional[str] = None) -> OdeModel:
    """
    Read and parse a model file; the model is named after the file by default
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"Cannot read model file {path}: {exc.strerror}")
    return parse_model_text(text, name=name or path.stem)


def format_model(model: OdeModel) -> str:
    """
    DSL text for a model; parse_model_text reads it back
    """
    lines = [f"states: {', '.join(model.states)}"]
    if model.parameters:
        lines.append(f"parameters: {', '.join(model.parameters)}")
    if model.known_inputs:
        lines.append(f"known_inputs: {', '.join(model.known_inputs)}")
    if model.unknown_inputs:
        items = [f"{w.name}[{'inf' if w.derivatives is None else w.derivatives}]" for w in model.unknown_inputs]
        lines.append(f"unknown_inputs: {', '.join(items)}")
    lines.append('dynamics:')
    lines.extend(f"    d({x})/dt = {to_text(f)}" for x, f in zip(model.states, model.dynamics))
    lines.append('outputs:')
    if model.output_labels:
        lines.extend(f"    {label} = {to_text(g)}" for label, g in zip(model.output_labels, model.outputs))
    else:
        lines.extend(f"    {to_text(g)}" for g in model.outputs)
    if model.initial_conditions:
        lines.append('initial_conditions:')
        lines.extend(f"    {x} = {format_number(v)}" for x, v in model.initial_conditions.items())
    return '\n'.join(lines) + '\n'
