from django.apps import AppConfig


class RationalizeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.rationalize'
