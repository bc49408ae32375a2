"""
Rationality checks and numerator/denominator normal forms
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from apps.core.exceptions import NonRationalError, ValidationError

from . import dag
from .dag import Node, NodeKind, topological_order
from .printing import format_number


@dataclass(frozen=True)
class Offender:
    """
    A node that keeps an expression from being rational.

    path lists the operators walked from the root down to the node.
    """
    kind: str
    detail: str
    path: str

    def describe(self) -> str:
        return f"{self.detail} at {self.path}"


@dataclass(frozen=True)
class RationalForm:
    numerator: Node
    denominator: Node

    @property
    def is_polynomial(self) -> bool:
        return self.denominator is dag.ONE


def _node_label(node: Node) -> str:
    if node.kind is NodeKind.FUNC:
        return node.value
    if node.kind is NodeKind.POW:
        return f"pow[{format_number(node.value)}]"
    return node.kind.value


def _offending(node: Node) -> bool:
    if node.kind is NodeKind.FUNC:
        return True
    return node.kind is NodeKind.POW and node.value.denominator != 1


def find_offenders(root: Node, *, label: str = 'expression') -> List[Offender]:
    """
    Non-rational nodes under root, each with the first path that reaches it
    """
    paths = {id(root): label}
    stack = [root]
    offenders = []
    while stack:
        node = stack.pop()
        path = paths[id(node)]
        if _offending(node):
            if node.kind is NodeKind.FUNC:
                offenders.append(Offender(node.value, f"{node.value}(...)", path))
            else:
                offenders.append(Offender('pow', f"exponent {format_number(node.value)}", path))
        for position, child in enumerate(node.children):
            if id(child) not in paths:
                paths[id(child)] = f"{path} > {_node_label(node)}.{position}"
                stack.append(child)
    return sorted(offenders, key=lambda o: o.path)


def is_rational(root: Node, *, label: str = 'expression') -> Tuple[bool, List[Offender]]:
    offenders = find_offenders(root, label=label)
    return not offenders, offenders


def rational_normal_forms(roots: Sequence[Node]) -> List[RationalForm]:
    """
    numerator/denominator pairs for several roots with one shared memo.

    Neither part contains div or non-integer pow. Polynomials keep the
    denominator ONE so callers can spot them by identity.

    Only a divisor that folds to the constant zero is rejected here. A
    denominator such as (a - b) + (b - a) passes and vanishes at every
    point; specialization catches it with check_denominators and
    resamples until the retry budget runs out.
    """
    forms: Dict[int, Tuple[Node, Node]] = {}
    for node in topological_order(roots):
        kind = node.kind
        if kind in (NodeKind.CONST, NodeKind.SYMBOL):
            forms[id(node)] = (node, dag.ONE)
            continue
        if _offending(node):
            offender = find_offenders(node)[0]
            raise NonRationalError(f"Non-rational node {offender.describe()}", offenders=(offender,))

        if kind is NodeKind.POW:
            n, d = forms[id(node.children[0])]
            forms[id(node)] = (dag.power(n, node.value), dag.power(d, node.value))
            continue

        (n1, d1), (n2, d2) = (forms[id(c)] for c in node.children)
        if kind in (NodeKind.ADD, NodeKind.SUB):
            combine = dag.add if kind is NodeKind.ADD else dag.sub
            if d1 is d2:
                forms[id(node)] = (combine(n1, n2), d1)
            else:
                forms[id(node)] = (combine(dag.mul(n1, d2), dag.mul(n2, d1)), dag.mul(d1, d2))
        elif kind is NodeKind.MUL:
            forms[id(node)] = (dag.mul(n1, n2), dag.mul(d1, d2))
        else:
            if n2.is_value(0):
                raise ValidationError("Denominator is identically zero")
            forms[id(node)] = (dag.mul(n1, d2), dag.mul(d1, n2))
    return [RationalForm(*forms[id(r)]) for r in roots]


def rational_normal_form(root: Node) -> RationalForm:
    return rational_normal_forms([root])[0]
