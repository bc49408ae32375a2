"""
Symbolic differentiation and substitution on the DAG
"""

from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Union

from . import dag
from .dag import Node, NodeKind, topological_order

Binding = Union[Node, int, Fraction]


def _derivative_step(node: Node, derivatives: Dict[int, Node], wrt: str) -> Node:
    kind = node.kind
    if kind is NodeKind.CONST:
        return dag.ZERO
    if kind is NodeKind.SYMBOL:
        return dag.ONE if node.value == wrt else dag.ZERO

    children = node.children
    d = [derivatives[id(c)] for c in children]
    if kind is NodeKind.ADD:
        return dag.add(d[0], d[1])
    if kind is NodeKind.SUB:
        return dag.sub(d[0], d[1])
    if kind is NodeKind.MUL:
        a, b = children
        return dag.add(dag.mul(d[0], b), dag.mul(a, d[1]))
    if kind is NodeKind.DIV:
        a, b = children
        if d[1].is_value(0):
            return dag.div(d[0], b)
        numerator = dag.sub(dag.mul(d[0], b), dag.mul(a, d[1]))
        return dag.div(numerator, dag.power(b, 2))
    if kind is NodeKind.POW:
        q = node.value
        base = children[0]
        return dag.mul(dag.mul(dag.const(q), dag.power(base, q - 1)), d[0])

    arg = children[0]
    name = node.value
    if name == 'log':
        outer = dag.div(dag.ONE, arg)
    elif name == 'exp':
        outer = node
    elif name == 'sin':
        outer = dag.func('cos', arg)
    elif name == 'cos':
        outer = dag.neg(dag.func('sin', arg))
    else:
        # tan' = 1 + tan^2
        outer = dag.add(dag.ONE, dag.power(node, 2))
    return dag.mul(outer, d[0])


def differentiate(root: Node, wrt: str) -> Node:
    """
    Exact partial derivative of root with respect to the symbol wrt
    """
    return gradient(root, [wrt])[0]


def gradient(root: Node, wrt: Sequence[str]) -> List[Node]:
    """
    Partial derivatives of root with respect to each name in wrt.

    Subtrees that do not mention a name are skipped for that name.
    """
    order = topological_order([root])
    depends: Dict[int, frozenset] = {}
    for node in order:
        if node.kind is NodeKind.SYMBOL:
            depends[id(node)] = frozenset((node.value,))
        else:
            depends[id(node)] = frozenset().union(*(depends[id(c)] for c in node.children))

    result = []
    for name in wrt:
        if name not in depends[id(root)]:
            result.append(dag.ZERO)
            continue
        derivatives: Dict[int, Node] = {}
        for node in order:
            if name not in depends[id(node)]:
                derivatives[id(node)] = dag.ZERO
            else:
                derivatives[id(node)] = _derivative_step(node, derivatives, name)
        result.append(derivatives[id(root)])
    return result


def substitute_many(roots: Sequence[Node], bindings: Mapping[str, Binding]) -> List[Node]:
    """
    Simultaneous substitution over several roots, folding numeric subtrees
    """
    if not bindings:
        return list(roots)
    replacements = {name: dag.as_node(value) for name, value in bindings.items()}

    def visit(node, children):
        if node.kind is NodeKind.SYMBOL:
            return replacements.get(node.value)
        return None

    return dag.rewrite(roots, visit)


def substitute(root: Node, bindings: Mapping[str, Binding]) -> Node:
    return substitute_many([root], bindings)[0]
