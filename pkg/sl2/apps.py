from django.apps import AppConfig


class Sl2Config(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "sl2"
    verbose_name = "SL2 action on S_k(Gamma(N))"
