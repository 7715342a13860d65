from django.apps import AppConfig


class LexicalConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "lexical"
