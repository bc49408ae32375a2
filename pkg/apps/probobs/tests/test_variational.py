"""
Unit tests for the power-series solution of the variational system
"""

from pathlib import Path

import pytest

from apps.core.exceptions import AnalysisTimeout
from apps.pipeline.options import AnalysisOptions
from apps.pipeline.preparation import prepare_model
from apps.probobs.specialization import specialize
from apps.probobs.variational import solve_variational, variational_residual
from apps.systems import selectors, services
from apps.systems.dsl import parse_model_text

PRIME = 2**61 - 1

EXPONENTIAL = """
states: x
dynamics:
    d(x)/dt = x
outputs:
    y = x
"""

GROWTH = """
states: x
parameters: theta
dynamics:
    d(x)/dt = theta*x
outputs:
    y = x
"""

CORPUS_DIR = Path(__file__).resolve().parents[3] / 'models'
SLOW_MODELS = {'nfkb'}
CORPUS = [
    pytest.param(path.parent.name, path.stem, marks=pytest.mark.slow) if path.parent.name in SLOW_MODELS
    else (path.parent.name, path.stem)
    for path in sorted(CORPUS_DIR.glob('*/*.model'))
]


def inverse_factorial(k):
    value = 1
    for i in range(2, k + 1):
        value = value * i % PRIME
    return pow(value, -1, PRIME)


def corpus_system(name, variant, seed, order=None):
    prepared = prepare_model(model=selectors.builtin_model(name=name, variant=variant),
                             options=AnalysisOptions.from_settings())
    return specialize(model=prepared.augmented, seed=seed, prime=PRIME, order=order)


class TestClosedForms:
    """Test against solutions known in closed form"""

    def test_exponential(self):
        """Test x' = x gives x0 * t^k / k! and Gamma = e^t"""
        model = services.augment_with_parameters(model=parse_model_text(EXPONENTIAL))
        system = specialize(model=model, seed=2, prime=PRIME, order=9)
        x0 = system.point.initial['x']

        solution = solve_variational(system)

        assert solution.phi[0].coeffs == tuple(x0 * inverse_factorial(k) % PRIME for k in range(9))
        assert solution.gamma[0][0].coeffs == tuple(inverse_factorial(k) for k in range(9))

    def test_growth(self):
        """Test x' = theta*x and its sensitivity to theta"""
        model = services.augment_with_parameters(model=parse_model_text(GROWTH))
        system = specialize(model=model, seed=2, prime=PRIME, order=7)
        x0, theta = system.point.initial['x'], system.point.initial['theta']

        solution = solve_variational(system)

        assert solution.phi[0].coeffs == tuple(
            x0 * pow(theta, k, PRIME) * inverse_factorial(k) % PRIME for k in range(7))
        assert solution.phi[1].coeffs == (theta,) + (0,) * 6
        assert solution.gamma[0][1].coeffs == (0,) + tuple(
            x0 * pow(theta, k - 1, PRIME) * inverse_factorial(k - 1) % PRIME for k in range(1, 7))
        assert solution.gamma[1][0].is_zero()
        assert solution.gamma[1][1].coeffs == (1,) + (0,) * 6


class TestNewton:
    """Test Newton doubling"""

    def test_valid_order_doubles(self):
        """Test the valid order goes 2, 4, 8 and stops at the target"""
        model = services.augment_with_parameters(model=parse_model_text(GROWTH))
        system = specialize(model=model, seed=2, prime=PRIME, order=13)

        solution = solve_variational(system)

        assert solution.steps == (2, 4, 8, 13)

    @pytest.mark.parametrize('name,variant', CORPUS)
    def test_matches_fixed_point_sweeps(self, name, variant):
        """Test Newton doubling and fixed-point sweeps agree"""
        system = corpus_system(name, variant, seed=17)

        newton = solve_variational(system)
        naive = solve_variational(system, method='naive')

        assert newton.phi == naive.phi
        assert newton.gamma == naive.gamma

    def test_deadline(self):
        """Test an expired deadline stops the solver"""
        system = corpus_system('c2m', 'known-input', seed=1)

        with pytest.raises(AnalysisTimeout):
            solve_variational(system, deadline=0.0)


class TestResidual:
    """Test the solution against the polynomial form of the system"""

    @pytest.mark.parametrize('seed', range(5))
    @pytest.mark.parametrize('name,variant', CORPUS)
    def test_residual_vanishes(self, name, variant, seed):
        """Test P(Phi) and its variation vanish below the top coefficient"""
        system = corpus_system(name, variant, seed)
        solution = solve_variational(system)

        phi_residual, gamma_residual = variational_residual(system, solution)

        top = solution.order - 1
        assert all(not any(r.coeffs[:top]) for r in phi_residual)
        assert all(not any(r.coeffs[:top]) for row in gamma_residual for r in row)

    @pytest.mark.parametrize('seed', range(5))
    @pytest.mark.parametrize('name,variant', CORPUS)
    def test_top_coefficient(self, name, variant, seed):
        """Test the top retained coefficient satisfies the system one order up"""
        system = corpus_system(name, variant, seed)
        order = system.order
        extended = corpus_system(name, variant, seed, order=order + 1)

        solution = solve_variational(extended, order)
        longer = solve_variational(extended)
        phi_residual, gamma_residual = variational_residual(extended, longer)

        assert all(not any(r.coeffs[:order]) for r in phi_residual)
        assert all(not any(r.coeffs[:order]) for row in gamma_residual for r in row)
        assert [s.coeffs for s in solution.phi] == [s.coeffs[:order] for s in longer.phi]
        assert [[s.coeffs for s in row] for row in solution.gamma] == \
            [[s.coeffs[:order] for s in row] for row in longer.gamma]

    @pytest.mark.parametrize('name,variant', CORPUS)
    def test_gamma_starts_at_identity(self, name, variant):
        """Test Gamma(0) is the identity"""
        system = corpus_system(name, variant, seed=4)

        solution = solve_variational(system)

        dim = system.model.dim
        assert [[solution.gamma[r][c].coeffs[0] for c in range(dim)] for r in range(dim)] == \
            [[int(r == c) for c in range(dim)] for r in range(dim)]

    def test_wrong_solution_is_caught(self):
        """Test a perturbed coefficient shows up in the residual"""
        system = corpus_system('c2m', 'known-input', seed=1)
        solution = solve_variational(system)
        broken = solution.phi[0].coeffs[:2] + ((solution.phi[0].coeffs[2] + 1) % PRIME,) + solution.phi[0].coeffs[3:]
        damaged = type(solution)(
            (type(solution.phi[0])(broken, system.field),) + solution.phi[1:],
            solution.gamma, solution.order)

        phi_residual, _ = variational_residual(system, damaged)

        assert any(phi_residual[0].coeffs[:solution.order - 1])
