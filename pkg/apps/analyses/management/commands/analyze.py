"""
obsrank analyze - classify one model
"""

import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.analyses import services
from apps.analyses.management.arguments import add_option_arguments, options_from_arguments
from apps.core.exceptions import AnalysisError
from apps.systems.dsl import parse_model_file
from apps.systems.selectors import builtin_model, parse_model_reference


class Command(BaseCommand):
    help = 'Decide observability and identifiability of a model (exit 0 FISPO, 1 deficient, 2 inconclusive)'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--model', metavar='FILE', help='model file')
        source.add_argument('--builtin', metavar='NAME[/VARIANT]', help='corpus model')
        parser.add_argument('--algorithm', choices=('fispo', 'probobs'), default='probobs')
        add_option_arguments(parser)
        parser.add_argument('--time-budget', type=float, metavar='SECONDS')
        parser.add_argument('--json', metavar='OUT', help="write the JSON report to OUT ('-' for stdout)")
        parser.add_argument('--record', action='store_true', help='store the report in the database')

    def handle(self, *args, **arguments):
        analysis_options = options_from_arguments(
            arguments, algorithm=arguments['algorithm'], time_budget=arguments.get('time_budget'))
        try:
            if arguments.get('model'):
                model = parse_model_file(Path(arguments['model']))
            else:
                entry = parse_model_reference(arguments['builtin'])
                model = builtin_model(name=entry.name, variant=entry.variant)
            report = services.analyze(model=model, options=analysis_options)
        except AnalysisError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code)

        if arguments.get('record'):
            run = services.analysis_record(report=report, options=analysis_options)
            self.stderr.write(f"recorded as run {run.id}")

        destination = arguments.get('json')
        if destination == '-':
            self.stdout.write(report.to_json())
        else:
            self.stdout.write(report.render_text(), ending='')
            if destination:
                Path(destination).write_text(report.to_json() + '\n')

        if report.exit_code:
            sys.exit(report.exit_code)
