from django.apps import AppConfig


class CycloConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "cyclo"
    verbose_name = "Cyclotomic arithmetic"
