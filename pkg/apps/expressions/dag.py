"""
Hash-consed expression DAG

Nodes are interned: building a structurally identical node twice returns the
same object, so identity is structural equality and shared subexpressions are
stored once. The smart constructors below fold constants and drop neutral
elements (e + 0, e * 1, e * 0); nothing else is simplified.
"""

import threading
import weakref
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from apps.core.exceptions import ValidationError

ANALYTIC_FUNCTIONS = ('log', 'exp', 'sin', 'cos', 'tan')

Number = Union[int, Fraction]


class NodeKind(Enum):
    CONST = 'const'
    SYMBOL = 'symbol'
    ADD = 'add'
    SUB = 'sub'
    MUL = 'mul'
    DIV = 'div'
    POW = 'pow'
    FUNC = 'func'


BINARY_KINDS = (NodeKind.ADD, NodeKind.SUB, NodeKind.MUL, NodeKind.DIV)

_INTERN = weakref.WeakValueDictionary()
_INTERN_LOCK = threading.Lock()


class Node:
    """
    One DAG node. Never instantiate directly; use the constructors.

    value holds the Fraction of a constant, the name of a symbol or
    function, or the exponent of a pow node.
    """
    __slots__ = ('kind', 'value', 'children', '__weakref__')

    def __init__(self, kind: NodeKind, value, children: Tuple['Node', ...]):
        self.kind = kind
        self.value = value
        self.children = children

    def __repr__(self):
        from .printing import to_text
        return f"Node({to_text(self)})"

    # Operator sugar over the smart constructors
    def __add__(self, other):
        return add(self, as_node(other))

    def __radd__(self, other):
        return add(as_node(other), self)

    def __sub__(self, other):
        return sub(self, as_node(other))

    def __rsub__(self, other):
        return sub(as_node(other), self)

    def __mul__(self, other):
        return mul(self, as_node(other))

    def __rmul__(self, other):
        return mul(as_node(other), self)

    def __truediv__(self, other):
        return div(self, as_node(other))

    def __rtruediv__(self, other):
        return div(as_node(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, exponent)

    @property
    def is_const(self) -> bool:
        return self.kind is NodeKind.CONST

    def is_value(self, number: Number) -> bool:
        return self.kind is NodeKind.CONST and self.value == number


def _intern(kind: NodeKind, value, children: Tuple[Node, ...]) -> Node:
    key = (kind, value, children)
    with _INTERN_LOCK:
        node = _INTERN.get(key)
        if node is None:
            node = Node(kind, value, children)
            _INTERN[key] = node
        return node


def const(number: Number) -> Node:
    return _intern(NodeKind.CONST, Fraction(number), ())


def symbol(name: str) -> Node:
    return _intern(NodeKind.SYMBOL, name, ())


ZERO = const(0)
ONE = const(1)
MINUS_ONE = const(-1)


def as_node(value) -> Node:
    if isinstance(value, Node):
        return value
    if isinstance(value, (int, Fraction)):
        return const(value)
    raise TypeError(f"Cannot use {type(value).__name__} as an expression")


def add(a: Node, b: Node) -> Node:
    if a.is_const and b.is_const:
        return const(a.value + b.value)
    if a.is_value(0):
        return b
    if b.is_value(0):
        return a
    return _intern(NodeKind.ADD, None, (a, b))


def sub(a: Node, b: Node) -> Node:
    if a.is_const and b.is_const:
        return const(a.value - b.value)
    if b.is_value(0):
        return a
    if a is b:
        return ZERO
    if a.is_value(0):
        return neg(b)
    return _intern(NodeKind.SUB, None, (a, b))


def mul(a: Node, b: Node) -> Node:
    if a.is_const and b.is_const:
        return const(a.value * b.value)
    if a.is_value(0) or b.is_value(0):
        return ZERO
    if a.is_value(1):
        return b
    if b.is_value(1):
        return a
    return _intern(NodeKind.MUL, None, (a, b))


def div(a: Node, b: Node) -> Node:
    if b.is_value(0):
        raise ValidationError("Division by the constant zero")
    if a.is_const and b.is_const:
        return const(a.value / b.value)
    if a.is_value(0):
        return ZERO
    if b.is_value(1):
        return a
    return _intern(NodeKind.DIV, None, (a, b))


def neg(a: Node) -> Node:
    return mul(MINUS_ONE, a)


def power(base: Node, exponent: Number) -> Node:
    """
    base ** exponent for a rational literal exponent.

    Negative integer exponents become a division by the positive power.
    """
    q = Fraction(exponent)
    if q == 0:
        return ONE
    if q == 1:
        return base
    if q.denominator == 1:
        if base.is_const:
            if base.value == 0 and q < 0:
                raise ValidationError("Zero raised to a negative power")
            return const(base.value ** q.numerator)
        if q < 0:
            return div(ONE, power(base, -q))
    return _intern(NodeKind.POW, q, (base,))


_FUNCTION_FOLDS = {
    ('exp', Fraction(0)): Fraction(1),
    ('log', Fraction(1)): Fraction(0),
    ('sin', Fraction(0)): Fraction(0),
    ('cos', Fraction(0)): Fraction(1),
    ('tan', Fraction(0)): Fraction(0),
}


def func(name: str, arg: Node) -> Node:
    if name not in ANALYTIC_FUNCTIONS:
        raise ValidationError(f"Unknown function '{name}'")
    if arg.is_const and (name, arg.value) in _FUNCTION_FOLDS:
        return const(_FUNCTION_FOLDS[(name, arg.value)])
    return _intern(NodeKind.FUNC, name, (arg,))


def rebuild(node: Node, children: Sequence[Node]) -> Node:
    """
    Same operator as node, new children, through the smart constructors
    """
    kind = node.kind
    if kind is NodeKind.ADD:
        return add(*children)
    if kind is NodeKind.SUB:
        return sub(*children)
    if kind is NodeKind.MUL:
        return mul(*children)
    if kind is NodeKind.DIV:
        return div(*children)
    if kind is NodeKind.POW:
        return power(children[0], node.value)
    if kind is NodeKind.FUNC:
        return func(node.value, children[0])
    return node


def topological_order(roots: Iterable[Node]) -> List[Node]:
    """
    Every node reachable from roots, children before parents, each once
    """
    seen = set()
    order = []
    for root in roots:
        if id(root) in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for child in reversed(node.children):
                if id(child) not in seen:
                    stack.append((child, False))
    return order


def rewrite(roots: Sequence[Node], visit: Callable[[Node, Tuple[Node, ...]], Optional[Node]]) -> List[Node]:
    """
    Bottom-up rewrite of several roots with one shared memo.

    visit(node, new_children) returns a replacement or None to keep the
    operator with the rewritten children.
    """
    memo: Dict[int, Node] = {}
    for node in topological_order(roots):
        children = tuple(memo[id(c)] for c in node.children)
        replacement = visit(node, children)
        if replacement is None:
            replacement = rebuild(node, children) if children != node.children else node
        memo[id(node)] = replacement
    return [memo[id(r)] for r in roots]


def free_symbols(roots: Union[Node, Iterable[Node]]) -> frozenset:
    if isinstance(roots, Node):
        roots = [roots]
    return frozenset(n.value for n in topological_order(roots) if n.kind is NodeKind.SYMBOL)


@dataclass(frozen=True)
class ExpressionDag:
    """
    Straight-line program for a set of roots.

    nodes is topologically sorted (children precede parents) and roots
    index into it; node_index maps each node back to its position.
    """
    nodes: Tuple[Node, ...]
    roots: Tuple[int, ...]

    @classmethod
    def from_roots(cls, roots: Sequence[Node]) -> 'ExpressionDag':
        nodes = tuple(topological_order(roots))
        position = {id(n): i for i, n in enumerate(nodes)}
        return cls(nodes, tuple(position[id(r)] for r in roots))

    def __len__(self):
        return len(self.nodes)

    @property
    def root_nodes(self) -> Tuple[Node, ...]:
        return tuple(self.nodes[i] for i in self.roots)

    def child_indices(self, index: int) -> Tuple[int, ...]:
        position = {id(n): i for i, n in enumerate(self.nodes)}
        return tuple(position[id(c)] for c in self.nodes[index].children)
