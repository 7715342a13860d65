"""
Django settings for the phishbench project.

Generated by 'django-admin startproject' using Django 4.0.4 and trimmed down
to a command-line toolkit: no database, no HTTP surface.

For more information on this file, see
https://docs.djangoproject.com/en/4.0/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.0/ref/settings/
"""

from pathlib import Path
import os


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("SECRET_KEY", default="foo")

DEBUG = int(os.environ.get("DEBUG", default=0))

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "django.contrib.auth",
    "rest_framework",
    "websites",
    "reduction",
    "classifiers",
    "scoring",
    "experiments",
    "lexical",
]

# Datasets, models and reports live on disk; nothing is persisted in a database.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/4.0/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Benchmark toolkit defaults. Command-line flags override these values.

BENCHMARK = {
    "DATA_DIR": Path(os.environ.get("BENCHMARK_DATA_DIR", default=BASE_DIR / "data")),
    "REPORT_DIR": Path(
        os.environ.get("BENCHMARK_REPORT_DIR", default=BASE_DIR / "reports")
    ),
    "SEED": int(os.environ.get("BENCHMARK_SEED", default=42)),
    "WORKERS": int(os.environ.get("BENCHMARK_WORKERS", default=1)),
    "FOLDS": 10,
    "VARIANCE_THRESHOLD": 0.95,
    "TOP_FEATURES": 10,
}


# Logging
# https://docs.djangoproject.com/en/4.0/topics/logging/

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.environ.get("BENCHMARK_LOG_LEVEL", default="WARNING"),
    },
}
