"""
Analysis signals - log recorded runs
"""

import logging

from django.db.models.signals import post_delete, post_save
from django.dispatch import receiver

from .models import AnalysisRun

logger = logging.getLogger(__name__)


@receiver(post_save, sender=AnalysisRun)
def analysis_run_created_handler(sender, instance, created, **kwargs):
    if created:
        logger.info("Recorded run %s: %s under %s is %s", instance.id, instance.model_id,
                    instance.algorithm, instance.status)


@receiver(post_delete, sender=AnalysisRun)
def analysis_run_deleted_handler(sender, instance, **kwargs):
    logger.info("Deleted run %s of %s", instance.id, instance.model_id)
