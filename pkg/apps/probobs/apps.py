from django.apps import AppConfig


class ProbobsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.probobs'
