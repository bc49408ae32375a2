"""
Option flags shared by the analyze and bench commands
"""

from django.core.management.base import CommandError

from apps.pipeline.options import AnalysisOptions
from apps.analyses.serializers import AnalysisOptionsSerializer

EXIT_INPUT_ERROR = 3

# Flag destination -> serializer field
OPTION_FLAGS = (
    'unknown_derivs', 'known_input_cap', 'fix', 'seed', 'prime', 'max_lie', 'min_lie', 'node_budget',
    'taylor_order', 'taylor_center', 'retry_budget', 'sample_bound', 'truncation_order',
)


def add_option_arguments(parser) -> None:
    parser.add_argument('--unknown-derivs', action='append', default=[], metavar='NAME=K',
                        help='nonzero derivatives of an unknown input (K or inf)')
    parser.add_argument('--known-input-cap', type=int, metavar='K',
                        help='highest nonzero derivative of the known inputs')
    parser.add_argument('--fix', action='append', default=[], metavar='NAME=VALUE',
                        help='bind a parameter to a number')
    parser.add_argument('--seed', type=int)
    parser.add_argument('--prime', type=int)
    parser.add_argument('--max-lie', type=int, metavar='K')
    parser.add_argument('--min-lie', type=int, metavar='K')
    parser.add_argument('--node-budget', type=int)
    parser.add_argument('--taylor-order', type=int, metavar='K')
    parser.add_argument('--taylor-center', action='append', default=[], metavar='NAME=VALUE',
                        help='expansion point of a state for non-rational terms')
    parser.add_argument('--retry-budget', type=int)
    parser.add_argument('--sample-bound', type=int)
    parser.add_argument('--truncation-order', type=int, metavar='N')


def options_from_arguments(arguments: dict, **extra) -> AnalysisOptions:
    """
    Validate the parsed flags with the API serializer
    """
    data = {name: arguments.get(name) for name in OPTION_FLAGS if arguments.get(name) not in (None, [])}
    data.update({key: value for key, value in extra.items() if value is not None})
    serializer = AnalysisOptionsSerializer(data=data)
    if not serializer.is_valid():
        problems = '; '.join(f"{field}: {' '.join(str(m) for m in messages)}"
                             for field, messages in serializer.errors.items())
        raise CommandError(f"Invalid options: {problems}", returncode=EXIT_INPUT_ERROR)
    return serializer.to_options()
