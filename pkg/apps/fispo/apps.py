from django.apps import AppConfig


class FispoConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.fispo'
