"""
Unit tests for extended Lie derivatives and the symbolic observability matrix
"""

import pytest

from apps.core.exceptions import AnalysisTimeout, ExpressionBudgetExceeded
from apps.expressions.evaluation import FieldAlgebra, evaluate
from apps.expressions.rational import is_rational
from apps.fispo.lie import SymbolicObservabilityMatrix, extended_lie_derivative
from apps.kernel.field import PrimeField
from apps.kernel.matrices import rank
from apps.probobs.jacobian import assemble_jacobian
from apps.probobs.specialization import specialize
from apps.probobs.variational import solve_variational
from apps.systems import selectors, services
from apps.systems.dsl import parse_model_text

F101 = PrimeField(101)
PRIME = 2**61 - 1

SMALL_RATIONAL = [
    ('2dof', 'both-unknown-0'),
    ('2dof', 'f2-unknown-0'),
    ('2dof', 'f2-unknown-2'),
    ('c2m', 'known-input'),
    ('c2m', 'unknown-b-0'),
    ('c2m', 'unknown-b-3'),
    ('c2m', 'unknown-b-k1e-0'),
    ('c2m', 'unknown-b-k1e-3'),
    ('hiv3', 'default'),
]

GROWTH = """
states: x
parameters: theta
dynamics:
    d(x)/dt = theta*x
outputs:
    y = x
"""

DRIVEN = """
states: x
known_inputs: u
dynamics:
    d(x)/dt = u*x
outputs:
    y = x
"""


def augmented(text):
    return services.augment_with_parameters(model=parse_model_text(text))


class TestExtendedLieDerivative:
    """Test Lie derivatives along the augmented dynamics"""

    def test_growth(self):
        """Test L1 = theta*x and L2 = theta^2*x for x' = theta*x"""
        model = augmented(GROWTH)
        env = {'x': 3, 'theta': 5}

        first = extended_lie_derivative(model.outputs[0], model, 1)
        second = extended_lie_derivative(first, model, 2)

        assert evaluate(first, env, FieldAlgebra(F101)) == 15
        assert evaluate(second, env, FieldAlgebra(F101)) == 75

    def test_known_input_jets(self):
        """Test L2 = u^2*x + u'*x picks up the next input jet"""
        model = augmented(DRIVEN)
        env = {'x': 2, 'u': 3, 'u__1': 5}

        first = extended_lie_derivative(model.outputs[0], model, 1)
        second = extended_lie_derivative(first, model, 2)

        assert evaluate(first, env, FieldAlgebra(F101)) == 6
        assert evaluate(second, env, FieldAlgebra(F101)) == 28

    def test_known_input_cap(self):
        """Test a cap of zero drops the input derivative term"""
        model = augmented(DRIVEN)
        env = {'x': 2, 'u': 3}

        first = extended_lie_derivative(model.outputs[0], model, 1, known_input_cap=0)
        second = extended_lie_derivative(first, model, 2, known_input_cap=0)

        assert evaluate(second, env, FieldAlgebra(F101)) == 18


class TestSymbolicObservabilityMatrix:
    """Test the block structure of the symbolic matrix"""

    def test_block_shapes(self):
        """Test every block has one row per output and one column per component"""
        model = augmented(GROWTH)
        matrix = SymbolicObservabilityMatrix(model)

        matrix.extend()
        matrix.extend()

        assert matrix.orders == 2
        assert [len(block) for block in matrix.blocks] == [1, 1, 1]
        assert all(len(row) == 2 for block in matrix.blocks for row in block)

    def test_growth_rank(self):
        """Test x' = theta*x reaches rank 2 after one Lie derivative"""
        model = augmented(GROWTH)
        matrix = SymbolicObservabilityMatrix(model)
        point = specialize(model=model, seed=3, prime=PRIME, order=3).point

        matrix.extend()

        assert rank(matrix.specialize(point, orders=0)) == 1
        assert rank(matrix.specialize(point)) == 2

    def test_rank_is_monotone(self):
        """Test adding blocks never lowers the rank"""
        model = services.augment_with_parameters(model=selectors.builtin_model(name='c2m', variant='known-input'))
        matrix = SymbolicObservabilityMatrix(model)
        point = specialize(model=model, seed=11, prime=PRIME, order=8).point
        for _ in range(6):
            matrix.extend()

        ranks = [rank(matrix.specialize(point, orders=k)) for k in range(7)]

        assert ranks == sorted(ranks)
        assert ranks[-1] == 6

    def test_node_budget(self):
        """Test growth past the node budget raises"""
        model = services.augment_with_parameters(model=selectors.builtin_model(name='c2m', variant='known-input'))
        matrix = SymbolicObservabilityMatrix(model, node_budget=40)

        with pytest.raises(ExpressionBudgetExceeded) as exc:
            for _ in range(10):
                matrix.extend()

        assert 'probobs' in exc.value.hint

    def test_deadline(self):
        """Test a deadline in the past stops the construction"""
        model = augmented(GROWTH)

        with pytest.raises(AnalysisTimeout):
            SymbolicObservabilityMatrix(model, deadline=0.0)


class TestAgreementWithSeries:
    """Test the symbolic rows against the series Jacobian at a shared point"""

    @pytest.mark.parametrize('name,variant', SMALL_RATIONAL)
    def test_rows_match(self, name, variant):
        """Test both engines produce the same numeric observability matrix"""
        source = selectors.builtin_model(name=name, variant=variant)
        caps, _ = services.resolve_input_caps(model=source)
        model = services.augment(model=source, caps=caps)
        system = specialize(model=model, seed=5, prime=PRIME)
        orders = system.order - 1
        matrix = SymbolicObservabilityMatrix(model)
        while matrix.orders < orders:
            matrix.extend()

        symbolic = matrix.specialize(system.point)
        series = assemble_jacobian(solve_variational(system), system)

        assert symbolic.entries == series.entries

    def test_covers_every_small_rational_model(self):
        """Test every rational corpus model of dimension 10 or less is compared"""
        qualifying = []
        for entry in selectors.corpus_list():
            source = selectors.builtin_model(name=entry.name, variant=entry.variant)
            if any(not is_rational(root)[0] for root in list(source.dynamics) + list(source.outputs)):
                continue
            caps, _ = services.resolve_input_caps(model=source)
            if services.augment(model=source, caps=caps).dim <= 10:
                qualifying.append((entry.name, entry.variant))

        assert sorted(qualifying) == sorted(SMALL_RATIONAL)
