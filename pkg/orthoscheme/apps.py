from typing import Any

from django.apps import AppConfig
from django.core.checks import CheckMessage, Error, register

from orthoscheme.config import config_problems, merged_settings

CHECK_IDS = {
    "CACHE": "orthoscheme.E001",
    "SAMPLING": "orthoscheme.E002",
    "EXACT": "orthoscheme.E003",
    "ROOTS": "orthoscheme.E004",
}

CHECK_HINTS = {
    "CACHE": 'Add the backend to settings.CACHES or change ORTHOSCHEME["CACHE"]["BACKEND"]',
    "SAMPLING": 'Fix ORTHOSCHEME["SAMPLING"] in your settings',
    "EXACT": 'Fix ORTHOSCHEME["EXACT"] in your settings',
    "ROOTS": 'Fix ORTHOSCHEME["ROOTS"] in your settings',
}


class OrthoschemeAppConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "orthoscheme"
    verbose_name = "Orthoscheme"


@register()
def check_orthoscheme_settings(app_configs: Any, **kwargs: Any) -> list[CheckMessage]:
    """Django system check for the ORTHOSCHEME setting"""
    return [
        Error(problem.message, hint=CHECK_HINTS[problem.section], id=CHECK_IDS[problem.section])
        for problem in config_problems(merged_settings())
    ]
