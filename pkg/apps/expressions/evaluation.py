"""
Generic bottom-up evaluation of DAG nodes

An algebra supplies the arithmetic (Z_p, truncated series over Z_p, exact
rationals); evaluate walks the DAG once and evaluates every shared node a
single time.
"""

from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence

from apps.core.exceptions import NonRationalError, ValidationError
from apps.kernel.field import PrimeField
from apps.kernel.series import TruncatedSeries, series_inv

from .dag import Node, NodeKind, topological_order
from .rational import find_offenders


class FieldAlgebra:
    """Arithmetic in Z_p"""

    def __init__(self, field: PrimeField):
        self.field = field

    def const(self, value: Fraction):
        return self.field.element(value)

    def coerce(self, value):
        return self.field.element(value)

    def add(self, a, b):
        return (a + b) % self.field.p

    def sub(self, a, b):
        return (a - b) % self.field.p

    def mul(self, a, b):
        return a * b % self.field.p

    def div(self, a, b):
        return self.field.div(a, b)

    def power(self, a, exponent: int):
        return self.field.power(a, exponent)


class SeriesAlgebra:
    """Arithmetic on truncated series of a fixed order; plain ints lift to constants"""

    def __init__(self, field: PrimeField, order: int):
        self.field = field
        self.order = order

    def const(self, value: Fraction):
        return TruncatedSeries.constant(self.field, self.field.element(value), self.order)

    def coerce(self, value):
        if isinstance(value, TruncatedSeries):
            return value
        return TruncatedSeries.constant(self.field, self.field.element(value), self.order)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a * series_inv(b)

    def power(self, a, exponent: int):
        return a ** exponent


class FractionAlgebra:
    """Exact rational arithmetic, used by oracles and rationalization checks"""

    def const(self, value: Fraction):
        return value

    def coerce(self, value):
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("Division by zero while evaluating over Q")
        return a / b

    def power(self, a, exponent: int):
        return a ** exponent


def evaluate_many(roots: Sequence[Node], env: Mapping[str, Any], algebra) -> List[Any]:
    """
    Values of several roots in one pass with a shared memo
    """
    values: Dict[int, Any] = {}
    for node in topological_order(roots):
        kind = node.kind
        if kind is NodeKind.CONST:
            value = algebra.const(node.value)
        elif kind is NodeKind.SYMBOL:
            if node.value not in env:
                raise ValidationError(f"Symbol '{node.value}' has no value")
            value = algebra.coerce(env[node.value])
        elif kind is NodeKind.FUNC or (kind is NodeKind.POW and node.value.denominator != 1):
            offenders = tuple(find_offenders(node))
            raise NonRationalError(f"Cannot evaluate {offenders[0].describe()} over a ring",
                                   offenders=offenders)
        elif kind is NodeKind.POW:
            value = algebra.power(values[id(node.children[0])], node.value.numerator)
        else:
            a, b = (values[id(c)] for c in node.children)
            if kind is NodeKind.ADD:
                value = algebra.add(a, b)
            elif kind is NodeKind.SUB:
                value = algebra.sub(a, b)
            elif kind is NodeKind.MUL:
                value = algebra.mul(a, b)
            else:
                value = algebra.div(a, b)
        values[id(node)] = value
    return [values[id(r)] for r in roots]


def evaluate(root: Node, env: Mapping[str, Any], algebra) -> Any:
    return evaluate_many([root], env, algebra)[0]
