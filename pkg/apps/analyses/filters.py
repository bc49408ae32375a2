"""
Analysis run filters
"""

import django_filters

from .models import AnalysisRun


class AnalysisRunFilter(django_filters.FilterSet):
    model_id = django_filters.CharFilter(lookup_expr='iexact')
    algorithm = django_filters.ChoiceFilter(choices=AnalysisRun.ALGORITHM_CHOICES)
    status = django_filters.ChoiceFilter(choices=AnalysisRun.STATUS_CHOICES)
    created_after = django_filters.IsoDateTimeFilter(field_name='created_at', lookup_expr='gte')

    class Meta:
        model = AnalysisRun
        fields = ['model_id', 'algorithm', 'status']
