from django.apps import AppConfig


class NewformsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "newforms"
    verbose_name = "Newform data and numerics"
