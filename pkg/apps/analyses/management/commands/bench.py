"""
obsrank bench - run a corpus suite under both engines and compare with goldens
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.analyses import services
from apps.analyses.management.arguments import add_option_arguments, options_from_arguments
from apps.analyses.selectors import suite_entries
from apps.core.exceptions import AnalysisError


class Command(BaseCommand):
    help = 'Benchmark corpus models: verdicts, durations and pass/fail against golden classifications'

    def add_arguments(self, parser):
        parser.add_argument('--suite', default='golden',
                            help="all, c2m, small, golden or a comma list of name[/variant]")
        parser.add_argument('--algorithms', default='both', help='fispo, probobs or both')
        parser.add_argument('--budget', type=float, metavar='SECONDS', help='time budget of one cell')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--json', metavar='OUT')
        parser.add_argument('--csv', metavar='OUT')
        add_option_arguments(parser)

    def handle(self, *args, **arguments):
        analysis_options = options_from_arguments(arguments)
        try:
            entries = suite_entries(suite=arguments['suite'])
            algorithms = services.parse_algorithms(arguments['algorithms'])
            rows = services.bench_run(
                entries=entries,
                algorithms=algorithms,
                budget=arguments.get('budget'),
                workers=arguments.get('workers'),
                options=analysis_options,
            )
        except AnalysisError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code)

        self.stdout.write(services.bench_to_text(rows), ending='')
        if arguments.get('json'):
            Path(arguments['json']).write_text(services.bench_to_json(rows) + '\n')
        if arguments.get('csv'):
            Path(arguments['csv']).write_text(services.bench_to_csv(rows))
        failed = sum(1 for row in rows if row.outcome in (services.FAIL, services.ERROR))
        if failed:
            self.stderr.write(f"{failed} of {len(rows)} cells failed")
