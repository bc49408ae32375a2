"""
Analysis selectors - all READ operations and queries
"""

from typing import List, Optional

from django.db.models import Count, QuerySet

from apps.core.exceptions import ValidationError
from apps.systems.selectors import CorpusEntry, corpus_list, parse_model_reference

from .models import AnalysisRun

# Named bench suites: corpus model names, or None for every entry
SUITES = {
    'all': None,
    'c2m': ('c2m',),
    'small': ('c2m', 'hiv3', '2dof'),
}


def analysis_run_get_by_id(*, run_id: int) -> Optional[AnalysisRun]:
    try:
        return AnalysisRun.objects.get(id=run_id)
    except AnalysisRun.DoesNotExist:
        return None


def analysis_run_list(*, filters: dict = None) -> QuerySet[AnalysisRun]:
    """
    Get list of runs with optional filters

    Supported filters:
    - model_id: str
    - algorithm: str
    - status: str
    """
    qs = AnalysisRun.objects.all()

    if filters:
        for key in ('model_id', 'algorithm', 'status'):
            if key in filters:
                qs = qs.filter(**{key: filters[key]})

    return qs.order_by('-created_at')


def analysis_run_statistics(*, model_id: str) -> dict:
    """
    Run counts per algorithm and status for one model
    """
    rows = (AnalysisRun.objects.filter(model_id=model_id)
            .values('algorithm', 'status').annotate(runs=Count('id')).order_by('algorithm', 'status'))
    return {
        'model_id': model_id,
        'runs': [dict(row) for row in rows],
    }


def suite_entries(*, suite: str) -> List[CorpusEntry]:
    """
    Corpus entries of a bench suite

    'all', 'c2m', 'small', 'golden' (entries with a golden file) or a comma
    list of name[/variant] references. An empty list gives an empty suite.
    """
    suite = suite.strip()
    if not suite:
        return []
    if suite == 'golden':
        return [e for e in corpus_list() if e.has_golden]
    if suite in SUITES:
        names = SUITES[suite]
        return [e for e in corpus_list() if names is None or e.name in names]
    entries = []
    for reference in suite.split(','):
        if not reference.strip():
            raise ValidationError(f"Empty entry in suite '{suite}'")
        name, _, variant = reference.strip().partition('/')
        if not variant:
            entries.extend(corpus_list(name=name) or [parse_model_reference(name)])
        else:
            entries.append(parse_model_reference(reference))
    return entries
