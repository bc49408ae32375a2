"""
Observability matrix from the series solution
"""

from typing import List, Optional

from apps.expressions.calculus import gradient
from apps.expressions.evaluation import SeriesAlgebra, evaluate_many
from apps.kernel.matrices import FieldMatrix

from .specialization import SpecializedSystem
from .variational import VariationalSolution


def output_sensitivities(solution: VariationalSolution, system: SpecializedSystem) -> List[List]:
    """
    grad y_r = (dg_r/dx)(Phi, u) Gamma, one series per (output, column)
    """
    model = system.model
    order = solution.order
    roots = [d for g in model.outputs for d in gradient(g, model.symbols)]
    env = {s: phi for s, phi in zip(model.symbols, solution.phi)}
    for name in model.known_inputs:
        env[name] = system.point.series(name, order)
    values = evaluate_many(roots, env, SeriesAlgebra(system.field, order))

    dim = model.dim
    sensitivities = []
    for r in range(model.n_outputs):
        partials = values[r * dim:(r + 1) * dim]
        row = []
        for c in range(dim):
            total = None
            for j, partial in enumerate(partials):
                if partial.is_zero():
                    continue
                term = partial * solution.gamma[j][c]
                total = term if total is None else total + term
            row.append(total if total is not None else partials[0].scale(0))
        sensitivities.append(row)
    return sensitivities


def assemble_jacobian(
    solution: VariationalSolution,
    system: SpecializedSystem,
    *,
    orders: Optional[int] = None,
    rescale: bool = True
) -> FieldMatrix:
    """
    Stack the coefficients of t^0..t^(orders-1) of grad y into a matrix

    Row j * n_y + r holds output r at derivative order j. With rescale the
    coefficient of t^j is multiplied by j!, so the row is d y_r^(j) / d x(0).
    """
    if orders is None:
        orders = solution.order
    field = system.field
    sensitivities = output_sensitivities(solution, system)
    rows = []
    for j in range(orders):
        factor = field.factorial(j) if rescale else 1
        for row in sensitivities:
            rows.append([series.coeffs[j] * factor % field.p for series in row])
    return FieldMatrix.from_rows(field, rows, cols=system.model.dim)
