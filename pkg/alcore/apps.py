from django.apps import AppConfig


class AlcoreConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "alcore"
    verbose_name = "Atkin-Lehner matrices"
