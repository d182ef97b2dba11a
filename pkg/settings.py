"""
Django settings for django-orthoscheme development and testing.
"""

from pathlib import Path

import environ

env = environ.Env()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env.str("DJANGO_SECRET_KEY", default="django-insecure-test-key-for-development-only")

DEBUG = env.bool("DJANGO_DEBUG", default=True)

ALLOWED_HOSTS: list[str] = []

# Application definition
INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "orthoscheme",  # Our package
]

# Nothing is persisted; results live in the cache only.
DATABASES: dict[str, dict[str, str]] = {}

# Result cache used by the orthoscheme computations
CACHES = {
    "default": env.cache("ORTHOSCHEME_CACHE_URL", default="locmemcache://orthoscheme"),
    "dummy": {
        "BACKEND": "django.core.cache.backends.dummy.DummyCache",
    },
}

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {"class": "logging.StreamHandler"},
    },
    "loggers": {
        "orthoscheme": {
            "handlers": ["console"],
            "level": env.str("ORTHOSCHEME_LOG_LEVEL", default="WARNING"),
        },
    },
}

ORTHOSCHEME = {
    "CACHE": {
        "ENABLED": True,
        "BACKEND": "default",
    },
    "SAMPLING": {
        "SAMPLES": 1_000_000,
        "SEED": 0,
    },
}
