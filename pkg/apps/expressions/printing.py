"""
Text and sympy renderings of expressions
"""

from fractions import Fraction
from typing import Dict, Tuple

import sympy

from .dag import Node, NodeKind, topological_order

_PRECEDENCE = {
    NodeKind.ADD: 1,
    NodeKind.SUB: 1,
    NodeKind.MUL: 2,
    NodeKind.DIV: 2,
    NodeKind.POW: 4,
}
_UNARY = 3
_ATOM = 5
_OPERATORS = {NodeKind.ADD: '+', NodeKind.SUB: '-', NodeKind.MUL: '*', NodeKind.DIV: '/'}


def format_number(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_text(root: Node) -> str:
    """
    Infix text that parse_expression reads back to the same node
    """
    rendered: Dict[int, Tuple[str, int]] = {}
    for node in topological_order([root]):
        kind = node.kind
        if kind is NodeKind.CONST:
            text = format_number(node.value)
            prec = _ATOM if node.value >= 0 and node.value.denominator == 1 else 0
            rendered[id(node)] = (f"({text})" if prec == 0 else text, _ATOM)
        elif kind is NodeKind.SYMBOL:
            rendered[id(node)] = (node.value, _ATOM)
        elif kind is NodeKind.FUNC:
            rendered[id(node)] = (f"{node.value}({rendered[id(node.children[0])][0]})", _ATOM)
        elif kind is NodeKind.POW:
            base, base_prec = rendered[id(node.children[0])]
            if base_prec <= _PRECEDENCE[NodeKind.POW]:
                base = f"({base})"
            rendered[id(node)] = (f"{base}^({format_number(node.value)})", _PRECEDENCE[NodeKind.POW])
        else:
            prec = _PRECEDENCE[kind]
            left, left_prec = rendered[id(node.children[0])]
            right, right_prec = rendered[id(node.children[1])]
            if kind is NodeKind.MUL and node.children[0].is_value(-1):
                rendered[id(node)] = (f"-{right if right_prec > _UNARY else f'({right})'}", _UNARY)
                continue
            if left_prec < prec:
                left = f"({left})"
            # Operators are left-associative; regrouping on the right needs parentheses
            if right_prec <= prec:
                right = f"({right})"
            rendered[id(node)] = (f"{left} {_OPERATORS[kind]} {right}", prec)
    return rendered[id(root)][0]


def to_sympy(root: Node) -> sympy.Expr:
    converted: Dict[int, sympy.Expr] = {}
    for node in topological_order([root]):
        kind = node.kind
        args = [converted[id(c)] for c in node.children]
        if kind is NodeKind.CONST:
            value = sympy.Rational(node.value.numerator, node.value.denominator)
        elif kind is NodeKind.SYMBOL:
            value = sympy.Symbol(node.value)
        elif kind is NodeKind.ADD:
            value = args[0] + args[1]
        elif kind is NodeKind.SUB:
            value = args[0] - args[1]
        elif kind is NodeKind.MUL:
            value = args[0] * args[1]
        elif kind is NodeKind.DIV:
            value = args[0] / args[1]
        elif kind is NodeKind.POW:
            value = args[0] ** sympy.Rational(node.value.numerator, node.value.denominator)
        else:
            value = getattr(sympy, node.value)(args[0])
        converted[id(node)] = value
    return converted[id(root)]
