"""
Extended Lie derivatives and the symbolic observability matrix
"""

import logging
import time
from typing import Dict, List, Optional

from apps.core.exceptions import AnalysisTimeout, ExpressionBudgetExceeded
from apps.expressions import dag
from apps.expressions.calculus import gradient
from apps.expressions.dag import Node, topological_order
from apps.expressions.evaluation import FieldAlgebra, evaluate_many
from apps.kernel.field import FieldElement
from apps.kernel.matrices import FieldMatrix
from apps.probobs.specialization import SpecializationPoint
from apps.systems.types import AugmentedModel, jet_symbol

logger = logging.getLogger(__name__)


def extended_lie_derivative(
    prev: Node,
    model: AugmentedModel,
    order: int,
    *,
    known_input_cap: Optional[int] = None
) -> Node:
    """
    L^order g from prev = L^(order-1) g

        (dprev/dx) f + sum_{j<order} (dprev/du^(j)) u^(j+1)

    Known-input derivatives above known_input_cap are zero.
    """
    jets = []
    for name in model.known_inputs:
        for level in range(order):
            if known_input_cap is None or level + 1 <= known_input_cap:
                jets.append((name, level))
    wrt = list(model.symbols) + [jet_symbol(name, level) for name, level in jets]
    partials = gradient(prev, wrt)

    total = dag.ZERO
    for partial, f in zip(partials, model.dynamics):
        if not partial.is_value(0) and not f.is_value(0):
            total = dag.add(total, dag.mul(partial, f))
    for partial, (name, level) in zip(partials[model.dim:], jets):
        if not partial.is_value(0):
            total = dag.add(total, dag.mul(partial, dag.symbol(jet_symbol(name, level + 1))))
    return total


class SymbolicObservabilityMatrix:
    """
    Row blocks of d(L^k g_r)/dx, one block per Lie order.

    blocks[k][r][c] is the derivative of L^k g_r with respect to component c.
    """

    def __init__(
        self,
        model: AugmentedModel,
        *,
        known_input_cap: Optional[int] = None,
        node_budget: Optional[int] = None,
        deadline: Optional[float] = None
    ):
        self.model = model
        self.known_input_cap = known_input_cap
        self.node_budget = node_budget
        self.deadline = deadline
        self.lie: List[List[Node]] = [list(model.outputs)]
        self.blocks: List[List[List[Node]]] = [self._block(self.lie[0])]
        self._check_budget()

    @property
    def orders(self) -> int:
        return len(self.blocks) - 1

    @property
    def labels(self):
        return self.model.labels

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise AnalysisTimeout(f"Lie derivatives of {self.model.source.name} ran past the time budget "
                                  f"at order {self.orders}")

    def _block(self, derivatives: List[Node]) -> List[List[Node]]:
        block = []
        for expression in derivatives:
            block.append(gradient(expression, self.model.symbols))
            self._check_deadline()
        return block

    def node_count(self) -> int:
        roots = [e for row in self.lie for e in row]
        roots += [entry for block in self.blocks for row in block for entry in row]
        return len(topological_order(roots))

    def _check_budget(self) -> None:
        if self.node_budget is None:
            return
        count = self.node_count()
        if count > self.node_budget:
            raise ExpressionBudgetExceeded(
                f"Symbolic observability matrix of {self.model.source.name} needs {count} nodes at order "
                f"{self.orders}, over the budget of {self.node_budget}")

    def extend(self) -> None:
        """
        Append the block of the next Lie order
        """
        order = self.orders + 1
        derivatives = []
        for previous in self.lie[-1]:
            derivatives.append(extended_lie_derivative(
                previous, self.model, order, known_input_cap=self.known_input_cap))
            self._check_deadline()
        self.lie.append(derivatives)
        self.blocks.append(self._block(derivatives))
        self._check_budget()
        logger.debug("%s: Lie order %d built", self.model.source.name, order)

    def specialize_block(self, k: int, point: SpecializationPoint) -> List[List[FieldElement]]:
        env: Dict[str, FieldElement] = point.jet_environment(k + 1)
        block = self.blocks[k]
        values = evaluate_many([entry for row in block for entry in row], env, FieldAlgebra(point.field))
        dim = self.model.dim
        return [values[r * dim:(r + 1) * dim] for r in range(len(block))]

    def specialize(self, point: SpecializationPoint, orders: Optional[int] = None) -> FieldMatrix:
        """
        Numeric matrix of blocks 0..orders at the point
        """
        if orders is None:
            orders = self.orders
        rows = []
        for k in range(orders + 1):
            rows.extend(self.specialize_block(k, point))
        return FieldMatrix.from_rows(point.field, rows, cols=self.model.dim)
