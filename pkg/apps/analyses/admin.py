"""
Analysis admin configuration
"""

from django.contrib import admin

from .models import AnalysisRun


@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    """
    Admin interface for AnalysisRun model
    """
    list_display = ['id', 'model_id', 'algorithm', 'status', 'rank', 'dimension', 'duration', 'created_at']
    list_filter = ['algorithm', 'status', 'created_at']
    search_fields = ['model_id']
    ordering = ['-created_at']
    readonly_fields = ['report', 'options', 'created_at', 'updated_at']

    fieldsets = (
        ('Analysis', {
            'fields': ('model_id', 'algorithm', 'status', 'stop_reason', 'rank', 'dimension')
        }),
        ('Specialization', {
            'fields': ('seed', 'prime', 'duration', 'options')
        }),
        ('Report', {
            'fields': ('report',)
        }),
        ('Timestamps', {
            'fields': ('created_at', 'updated_at')
        }),
    )
