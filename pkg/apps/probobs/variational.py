"""
Power-series solution of the variational system

For the augmented system x' = F(x, u(t)), x(0) = x0, this computes mod t^N

    Phi   the solution,                 Phi(0) = x0
    Gamma = dPhi/dx0, Gamma' = A Gamma,  Gamma(0) = I,  A = dF/dx (Phi, u)

Parameters are components of x, so the parameter columns of Gamma are the
sensitivities to the parameters and start at zero.

Phi is found by Newton doubling: with Phi valid to m coefficients, the
correction E solves the linear system E' = A E + (F(Phi) - Phi') and
Phi + E is valid to 2m coefficients. Linear systems are solved
coefficient by coefficient:

    (k+1) E_{k+1} = b_k + sum_{i<=k} A_i E_{k-i}
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from apps.core.exceptions import AnalysisTimeout
from apps.expressions import dag
from apps.expressions.calculus import gradient
from apps.expressions.evaluation import SeriesAlgebra, evaluate_many
from apps.kernel.series import TruncatedSeries, inverse_table, series_derivative
from apps.systems.types import AugmentedModel

from .specialization import SpecializedSystem

logger = logging.getLogger(__name__)

# (row, column, coefficients) of a nonzero Jacobian entry
SparseEntry = Tuple[int, int, List[int]]


@dataclass(frozen=True)
class VariationalSolution:
    phi: Tuple[TruncatedSeries, ...]
    gamma: Tuple[Tuple[TruncatedSeries, ...], ...]
    order: int
    steps: Tuple[int, ...] = ()


class VariationalProgram:
    """
    Dynamics and their nonzero Jacobian entries as one straight-line program
    """

    def __init__(self, model: AugmentedModel):
        self.model = model
        self.dim = model.dim
        self.entries: List[Tuple[int, int, dag.Node]] = []
        for i, f in enumerate(model.dynamics):
            for j, derivative in enumerate(gradient(f, model.symbols)):
                if not derivative.is_value(0):
                    self.entries.append((i, j, derivative))
        self.roots = list(model.dynamics) + [node for _, _, node in self.entries]

    def environment(self, system: SpecializedSystem, phi: Sequence[Sequence[int]], order: int) -> Dict:
        field = system.field
        env = {s: TruncatedSeries(tuple(c), field).truncate(order) for s, c in zip(self.model.symbols, phi)}
        for name in self.model.known_inputs:
            env[name] = system.point.series(name, order)
        return env

    def evaluate(self, system: SpecializedSystem, phi: Sequence[Sequence[int]],
                 order: int) -> Tuple[List[List[int]], List[SparseEntry]]:
        """
        F(Phi) and the nonzero entries of A(Phi), as coefficient lists of length order
        """
        values = evaluate_many(self.roots, self.environment(system, phi, order),
                               SeriesAlgebra(system.field, order))
        rhs = [list(v.coeffs) for v in values[:self.dim]]
        entries = [(i, j, list(v.coeffs))
                   for (i, j, _), v in zip(self.entries, values[self.dim:]) if not v.is_zero()]
        return rhs, entries


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise AnalysisTimeout("Series solution ran past the time budget")


def solve_linear(
    entries: Sequence[SparseEntry],
    dim: int,
    initial: Sequence[Sequence[int]],
    forcing: Optional[Sequence[Sequence[Sequence[int]]]],
    order: int,
    p: int,
    deadline: Optional[float] = None
) -> List[List[List[int]]]:
    """
    Solve X' = A X + B mod t^order for each column of initial values

    Returns X[column][row] as coefficient lists.
    """
    inverses = inverse_table(p, order)
    solution = []
    for c, start in enumerate(initial):
        column = [[start[r] % p] + [0] * (order - 1) for r in range(dim)]
        for k in range(order - 1):
            acc = [forcing[c][r][k] for r in range(dim)] if forcing is not None else [0] * dim
            for r, s, a in entries:
                x = column[s]
                total = 0
                for i in range(k + 1):
                    if a[i] and x[k - i]:
                        total += a[i] * x[k - i]
                acc[r] += total
            inv = inverses[k + 1]
            for r in range(dim):
                column[r][k + 1] = acc[r] % p * inv % p
        solution.append(column)
        _check_deadline(deadline)
    return solution


def _pad(coeffs: Sequence[int], order: int) -> List[int]:
    return list(coeffs[:order]) + [0] * (order - len(coeffs))


def newton_phi(
    system: SpecializedSystem,
    program: VariationalProgram,
    order: int,
    deadline: Optional[float] = None
) -> Tuple[List[List[int]], Tuple[int, ...]]:
    """
    Phi mod t^order by Newton doubling; also returns the valid order after each step
    """
    p = system.field.p
    dim = program.dim
    phi = [[system.point.initial[s]] for s in program.model.symbols]
    valid = 1
    steps = []
    while valid < order:
        target = min(2 * valid, order)
        phi = [_pad(c, target) for c in phi]
        rhs, entries = program.evaluate(system, phi, target)
        forcing = [[(rhs[r][k] - (k + 1) * (phi[r][k + 1] if k + 1 < target else 0)) % p
                    for k in range(target)] for r in range(dim)]
        correction = solve_linear(entries, dim, [[0] * dim], [forcing], target, p, deadline)[0]
        phi = [[(a + b) % p for a, b in zip(phi[r], correction[r])] for r in range(dim)]
        valid = target
        steps.append(valid)
        logger.debug("Newton step for %s valid to order %d", program.model.source.name, valid)
        _check_deadline(deadline)
    return [_pad(c, order) for c in phi], tuple(steps)


def naive_phi(system: SpecializedSystem, program: VariationalProgram, order: int) -> List[List[int]]:
    """
    Phi mod t^order by fixed-point sweeps, one coefficient per sweep
    """
    p = system.field.p
    inverses = inverse_table(p, order)
    phi = [_pad([system.point.initial[s]], order) for s in program.model.symbols]
    for _ in range(order - 1):
        rhs, _ = program.evaluate(system, phi, order)
        phi = [[c[0]] + [rhs[r][k] * inverses[k + 1] % p for k in range(order - 1)]
               for r, c in enumerate(phi)]
    return phi


def naive_gamma(system: SpecializedSystem, program: VariationalProgram,
                phi: Sequence[Sequence[int]], order: int) -> List[List[List[int]]]:
    """
    Gamma[column][row] by fixed-point sweeps of Gamma = I + int A Gamma
    """
    p = system.field.p
    dim = program.dim
    inverses = inverse_table(p, order)
    _, entries = program.evaluate(system, phi, order)
    identity = [[1 if r == c else 0 for r in range(dim)] for c in range(dim)]
    gamma = [[_pad([identity[c][r]], order) for r in range(dim)] for c in range(dim)]
    for _ in range(order - 1):
        updated = []
        for c in range(dim):
            products = [[0] * order for _ in range(dim)]
            for r, s, a in entries:
                x = gamma[c][s]
                for k in range(order):
                    products[r][k] += sum(a[i] * x[k - i] for i in range(k + 1))
            updated.append([[identity[c][r]] + [products[r][k] * inverses[k + 1] % p for k in range(order - 1)]
                            for r in range(dim)])
        gamma = updated
    return gamma


def _solution(system: SpecializedSystem, phi, gamma_by_column, order: int, steps=()) -> VariationalSolution:
    field = system.field
    dim = len(phi)
    phi_series = tuple(TruncatedSeries(tuple(c), field) for c in phi)
    gamma = tuple(tuple(TruncatedSeries(tuple(gamma_by_column[c][r]), field) for c in range(dim))
                  for r in range(dim))
    return VariationalSolution(phi_series, gamma, order, tuple(steps))


def solve_variational(
    system: SpecializedSystem,
    order: Optional[int] = None,
    *,
    method: str = 'newton',
    program: Optional[VariationalProgram] = None,
    deadline: Optional[float] = None
) -> VariationalSolution:
    """
    Phi and Gamma mod t^order (default: the system's truncation order)

    method 'newton' is the production path; 'naive' gains one order per sweep
    and only serves as a cross-check.
    """
    if order is None:
        order = system.order
    if program is None:
        program = VariationalProgram(system.model)
    dim = program.dim
    p = system.field.p

    if method == 'naive':
        phi = naive_phi(system, program, order)
        return _solution(system, phi, naive_gamma(system, program, phi, order), order)

    phi, steps = newton_phi(system, program, order, deadline)
    _, entries = program.evaluate(system, phi, order)
    identity = [[1 if r == c else 0 for r in range(dim)] for c in range(dim)]
    gamma = solve_linear(entries, dim, identity, None, order, p, deadline)
    logger.debug("Solved variational system of %s to order %d in %d Newton steps",
                 system.model.source.name, order, len(steps))
    return _solution(system, phi, gamma, order, steps)


def variational_residual(
    system: SpecializedSystem,
    solution: VariationalSolution
) -> Tuple[List[TruncatedSeries], List[List[TruncatedSeries]]]:
    """
    Residuals of P and of its variation on (Phi, Gamma)

    With P_i = den_i(x) x_i' - num_i(x), returns P_i(Phi) and, per column c,
    sum_j dP_i/dx_j Gamma[j][c] + den_i Gamma[i][c]'. Both vanish below the
    top coefficient when the solution is right.
    """
    model = system.model
    symbols = model.symbols
    order = solution.order
    roots = []
    for form in system.forms:
        roots.append(form.numerator)
        roots.append(form.denominator)
        roots.extend(gradient(form.numerator, symbols))
        roots.extend(gradient(form.denominator, symbols))
    env = {s: phi for s, phi in zip(symbols, solution.phi)}
    for name in model.known_inputs:
        env[name] = system.point.series(name, order)
    values = evaluate_many(roots, env, SeriesAlgebra(system.field, order))

    dim = model.dim
    stride = 2 + 2 * dim
    phi_residual = []
    gamma_residual = []
    for i in range(dim):
        block = values[i * stride:(i + 1) * stride]
        num, den = block[0], block[1]
        d_num, d_den = block[2:2 + dim], block[2 + dim:]
        velocity = series_derivative(solution.phi[i])
        phi_residual.append(den * velocity - num)
        row = []
        for c in range(dim):
            total = den * series_derivative(solution.gamma[i][c])
            for j in range(dim):
                coefficient = d_den[j] * velocity - d_num[j]
                if not coefficient.is_zero():
                    total = total + coefficient * solution.gamma[j][c]
            row.append(total)
        gamma_residual.append(row)
    return phi_residual, gamma_residual
