"""
Shared model bases
"""

from django.db import models


class TimestampedModel(models.Model):
    """
    Abstract base for recorded objects: creation and last-change times
    """
    created_at = models.DateTimeField(auto_now_add=True, help_text="When the record was stored")
    updated_at = models.DateTimeField(auto_now=True, help_text="Last change to the record")

    class Meta:
        abstract = True
