from django.apps import AppConfig


class QexpConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "qexp"
    verbose_name = "q-expansions"
