from django.apps import AppConfig


class ModcurveConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "modcurve"
    verbose_name = "Modular curves and canonical models"
