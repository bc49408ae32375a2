"""
Analysis views - API endpoints using Django REST Framework
"""

from rest_framework import status, viewsets
from rest_framework.decorators import action
from rest_framework.response import Response

from apps.core.exceptions import AnalysisError, NotFoundError
from apps.pipeline.reports import AnalysisReport
from apps.systems.dsl import parse_model_text
from apps.systems.selectors import builtin_model, corpus_list

from . import selectors, services
from .filters import AnalysisRunFilter
from .serializers import AnalysisCreateSerializer, AnalysisRunSerializer, CorpusEntrySerializer


def error_response(exc: AnalysisError) -> Response:
    code = status.HTTP_404_NOT_FOUND if isinstance(exc, NotFoundError) else status.HTTP_400_BAD_REQUEST
    body = {'error': str(exc)}
    if exc.hint:
        body['hint'] = exc.hint
    return Response(body, status=code)


class AnalysisRunViewSet(viewsets.ModelViewSet):
    """
    ViewSet for analysis runs

    Router layer - handles HTTP only
    """
    serializer_class = AnalysisRunSerializer
    filterset_class = AnalysisRunFilter
    http_method_names = ['get', 'post', 'delete', 'head', 'options']
    lookup_value_regex = r'\d+'

    def get_queryset(self):
        return selectors.analysis_run_list()

    def create(self, request):
        """
        Run an analysis on a corpus model or posted model text and store it
        """
        serializer = AnalysisCreateSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        options = serializer.to_options()

        try:
            if data.get('model'):
                model = builtin_model(name=data['model'], variant=data.get('variant'))
            else:
                model = parse_model_text(data['model_text'], name=data['name'])
            report = services.analyze(model=model, options=options)
        except AnalysisError as e:
            return error_response(e)

        run = services.analysis_record(report=report, options=options)
        return Response(
            AnalysisRunSerializer(run).data,
            status=status.HTTP_201_CREATED
        )

    def retrieve(self, request, pk=None):
        run = selectors.analysis_run_get_by_id(run_id=int(pk))

        if not run:
            return Response(
                {'error': 'Analysis run not found'},
                status=status.HTTP_404_NOT_FOUND
            )

        return Response(AnalysisRunSerializer(run).data)

    def destroy(self, request, pk=None):
        try:
            services.analysis_run_delete(run_id=int(pk))
        except AnalysisError as e:
            return error_response(e)

        return Response(status=status.HTTP_204_NO_CONTENT)

    @action(detail=True, methods=['get'])
    def text(self, request, pk=None):
        """
        Human-readable rendering of the stored report
        """
        run = selectors.analysis_run_get_by_id(run_id=int(pk))

        if not run:
            return Response(
                {'error': 'Analysis run not found'},
                status=status.HTTP_404_NOT_FOUND
            )

        return Response({'text': AnalysisReport.from_dict(run.report).render_text()})

    @action(detail=False, methods=['get'], url_path='model/(?P<model_id>.+)/statistics')
    def model_statistics(self, request, model_id=None):
        return Response(selectors.analysis_run_statistics(model_id=model_id))


class CorpusViewSet(viewsets.ViewSet):
    """
    Read-only listing of the shipped model corpus
    """

    def list(self, request):
        entries = corpus_list(name=request.query_params.get('name'))
        return Response(CorpusEntrySerializer(entries, many=True).data)
