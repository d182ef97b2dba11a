"""
Stand-alone ``orthoscheme`` executable.

Runs the management command without a Django project. When ``DJANGO_SETTINGS_MODULE``
is unset, minimal settings with an in-memory cache are configured.
"""

import os
import sys
from collections.abc import Sequence

import django
import environ
from django.conf import settings
from django.core.management.base import CommandError


def configure_standalone() -> None:
    """Configure settings for use outside a Django project, unless already done"""
    if settings.configured or os.environ.get("DJANGO_SETTINGS_MODULE"):
        return
    env = environ.Env()
    settings.configure(
        INSTALLED_APPS=["orthoscheme"],
        CACHES={"default": env.cache("ORTHOSCHEME_CACHE_URL", default="locmemcache://orthoscheme")},
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Run one sub-command and return its exit code"""
    configure_standalone()
    django.setup()
    from orthoscheme.management.commands.orthoscheme import Command

    args = list(sys.argv[1:] if argv is None else argv)
    try:
        Command().run_from_argv(["orthoscheme", "orthoscheme", *args])
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except CommandError as e:
        # Raised while parsing sub-command arguments, before Django's own handler runs
        sys.stderr.write(f"{e.__class__.__name__}: {e}\n")
        return e.returncode
    return 0


def main() -> None:
    sys.exit(run())
