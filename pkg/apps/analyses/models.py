"""
Analysis run models
"""

from django.db import models

from apps.core.models import TimestampedModel


class AnalysisRun(TimestampedModel):
    """
    One recorded analysis and its full report
    """
    ALGORITHM_CHOICES = [
        ('fispo', 'FISPO'),
        ('probobs', 'ProbObsTest'),
    ]
    STATUS_CHOICES = [
        ('fispo', 'FISPO'),
        ('deficient', 'Deficient'),
        ('inconclusive', 'Inconclusive'),
    ]

    model_id = models.CharField(max_length=200)
    algorithm = models.CharField(max_length=20, choices=ALGORITHM_CHOICES)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES)
    stop_reason = models.CharField(max_length=40)
    rank = models.PositiveIntegerField(null=True, blank=True)
    dimension = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    prime = models.DecimalField(max_digits=40, decimal_places=0)
    duration = models.FloatField()
    options = models.JSONField(default=dict)
    report = models.JSONField()

    class Meta:
        db_table = 'analysis_runs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['model_id', 'algorithm'], name='analysis_ru_model_i_5c1f0e_idx'),
            models.Index(fields=['status'], name='analysis_ru_status_8d2b41_idx'),
            models.Index(fields=['created_at'], name='analysis_ru_created_3a9e7c_idx'),
        ]

    def __str__(self):
        return f"Run {self.id} - {self.model_id} - {self.algorithm}: {self.status}"
