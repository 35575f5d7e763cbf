from django.apps import AppConfig


class ZlinalgConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "zlinalg"
    verbose_name = "Exact linear algebra"
