"""
Unit tests for model augmentation and variable fixing
"""

import pytest

from apps.core.exceptions import NotFoundError, ValidationError
from apps.expressions import dag
from apps.expressions.dag import free_symbols
from apps.systems import selectors, services
from apps.systems.dsl import parse_model_text
from apps.systems.types import Component

GROWTH = """
states: x
parameters: theta
dynamics:
    d(x)/dt = theta*x
outputs:
    x
"""


class TestAugmentWithParameters:
    """Test parameter augmentation"""

    def test_growth_model(self):
        """Test x' = theta*x becomes a two-dimensional system"""
        model = parse_model_text(GROWTH)

        augmented = services.augment_with_parameters(model=model)

        assert augmented.symbols == ('x', 'theta')
        assert augmented.dynamics == (model.dynamics[0], dag.ZERO)
        assert [c.tag for c in augmented.components] == [Component.STATE, Component.PARAMETER]

    def test_c2m_dimension(self):
        """Test C2M with its input known has six augmented components"""
        model = selectors.builtin_model(name='C2M', variant='known-input')

        assert services.augment_with_parameters(model=model).dim == 6

    def test_no_parameters(self):
        """Test a parameter-free model only gets tagged"""
        model = parse_model_text(GROWTH.replace('parameters: theta\n', '').replace('theta*x', '2*x'))

        augmented = services.augment_with_parameters(model=model)

        assert augmented.dynamics == model.dynamics
        assert augmented.components[0].tag is Component.STATE


class TestAugmentWithUnknownInputs:
    """Test unknown-input jet augmentation"""

    def test_constant_force(self):
        """Test 2DOF with F2 unknown and constant has dimension 8"""
        model = selectors.builtin_model(name='2dof', variant='f2-unknown-0')

        augmented = services.augment(model=model, caps={'F2': 0})

        assert augmented.labels == ('x1', 'x2', 'dx1', 'dx2', 'k1', 'dk1', 'm2', 'F2')
        assert augmented.dynamics[-1] is dag.ZERO

    def test_two_derivatives(self):
        """Test a cap of two adds F2, F2' and F2'' with a constant top level"""
        model = selectors.builtin_model(name='2dof', variant='f2-unknown-2')

        augmented = services.augment(model=model, caps={'F2': 2})

        assert augmented.dim == 10
        assert augmented.labels[-3:] == ('F2', "F2'", "F2''")
        assert augmented.dynamics[-3:] == (dag.symbol('F2__1'), dag.symbol('F2__2'), dag.ZERO)
        assert [c.level for c in augmented.components[-3:]] == [0, 1, 2]

    def test_pk_dimension(self):
        """Test PK with three input derivatives has 4 + 9 + 4 components"""
        model = selectors.builtin_model(name='pk', variant='unknown-input-3')

        assert services.augment(model=model, caps={'u': 3}).dim == 17

    def test_order_does_not_matter(self):
        """Test both augmentation orders give the same model"""
        model = selectors.builtin_model(name='2dof', variant='both-unknown-2')
        caps = {'F1': 2, 'F2': 1}

        first = services.augment_with_unknown_inputs(
            model=services.augment_with_parameters(model=model), caps=caps)
        second = services.augment_with_parameters(
            model=services.augment_with_unknown_inputs(model=model, caps=caps))

        assert first == second

    def test_closed_symbol_set(self):
        """Test every symbol of the augmented system is a component or a known input"""
        for entry in selectors.corpus_list():
            model = selectors.builtin_model(name=entry.name, variant=entry.variant)
            caps, _ = services.resolve_input_caps(model=model)
            augmented = services.augment(model=model, caps=caps)

            allowed = set(augmented.symbols) | set(model.known_inputs)

            assert free_symbols(augmented.dynamics + augmented.outputs) <= allowed, entry.key


class TestResolveInputCaps:
    """Test derivative cap resolution"""

    def test_declared_caps(self):
        """Test caps come from the model file"""
        model = selectors.builtin_model(name='pk', variant='unknown-input-3')

        assert services.resolve_input_caps(model=model) == ({'u': 3}, [])

    def test_override(self):
        """Test an override replaces the declared cap"""
        model = selectors.builtin_model(name='pk', variant='unknown-input-3')

        caps, _ = services.resolve_input_caps(model=model, overrides={'u': 1})

        assert caps == {'u': 1}

    def test_infinite_request_is_lowered(self, settings):
        """Test an unbounded request falls back to the default cap with a caveat"""
        settings.OBSRANK_DEFAULT_INFINITE_CAP = 3
        model = selectors.builtin_model(name='pk', variant='unknown-input-0')

        caps, caveats = services.resolve_input_caps(model=model, overrides={'u': None})

        assert caps == {'u': 3}
        assert len(caveats) == 1 and 'lowered to 3' in caveats[0]

    def test_unknown_name(self):
        """Test overriding an undeclared input is rejected"""
        model = selectors.builtin_model(name='pk', variant='unknown-input-0')

        with pytest.raises(NotFoundError):
            services.resolve_input_caps(model=model, overrides={'w': 1})


class TestFixVariables:
    """Test fixing parameters to values"""

    def test_known_b(self):
        """Test fixing b gives the three-parameter C2M"""
        model = selectors.builtin_model(name='c2m', variant='known-input')

        fixed = services.fix_variables(model=model, bindings={'b': 1})

        assert fixed.parameters == ('k1e', 'k12', 'k21')
        assert 'b' not in free_symbols(fixed.dynamics)

    def test_known_b_and_k1e(self):
        """Test fixing b and k1e leaves two parameters"""
        model = selectors.builtin_model(name='c2m', variant='known-input')

        fixed = services.fix_variables(model=model, bindings={'b': 1, 'k1e': 2})

        assert fixed.parameters == ('k12', 'k21')

    def test_all_parameters(self):
        """Test fixing everything leaves a pure observability problem"""
        model = selectors.builtin_model(name='hiv3')

        fixed = services.fix_variables(model=model, bindings={p: 3 for p in model.parameters})

        assert fixed.parameters == ()
        assert services.augment_with_parameters(model=fixed).dim == 3

    def test_unknown_name(self):
        """Test fixing an undeclared name fails"""
        model = selectors.builtin_model(name='hiv3')

        with pytest.raises(NotFoundError):
            services.fix_variables(model=model, bindings={'omega': 1})

    def test_state_is_not_fixable(self):
        """Test states cannot be fixed"""
        model = selectors.builtin_model(name='hiv3')

        with pytest.raises(ValidationError):
            services.fix_variables(model=model, bindings={'V': 1})


class TestTreatInputsAsUnknown:
    """Test moving a known input to the unknown list"""

    def test_c2m(self):
        """Test C2M with u unknown matches the unknown-input file up to b"""
        model = selectors.builtin_model(name='c2m', variant='known-input')

        moved = services.treat_inputs_as_unknown(model=model, names=('u',), derivatives=3)
        fixed = services.fix_variables(model=moved, bindings={'b': 1})
        reference = selectors.builtin_model(name='c2m', variant='unknown-b-3')

        assert fixed.known_inputs == ()
        assert fixed.unknown_inputs == reference.unknown_inputs
        assert fixed.dynamics == reference.dynamics
