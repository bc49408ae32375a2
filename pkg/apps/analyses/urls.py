"""
Analysis URL configuration
"""

from django.urls import include, path
from rest_framework.routers import DefaultRouter

from . import views

router = DefaultRouter()
router.register(r'analyses', views.AnalysisRunViewSet, basename='analysis')
router.register(r'corpus', views.CorpusViewSet, basename='corpus')

urlpatterns = [
    path('', include(router.urls)),
]
