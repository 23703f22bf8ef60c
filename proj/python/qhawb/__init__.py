"""Exact verification workbench for finite-dimensional quasi-Hopf algebras."""

import json

from ._core import (
    QhaError,
    catalog_names,
    cointegrals,
    export_text,
    import_text,
    integrals,
)
from . import _core

__all__ = [
    "QhaError",
    "catalog_names",
    "cointegrals",
    "double",
    "export",
    "export_text",
    "import_text",
    "integrals",
    "verify",
]


def verify(source, suite="all", exhaustive=False, generic=False, jobs=1):
    """Run verification suites and return the report document as a dict."""
    return json.loads(_core.verify(source, suite, exhaustive, generic, jobs))


def export(source):
    """Presentation document of `source` as a dict."""
    return json.loads(export_text(source))


def double(source):
    """Presentation document of D(H) as a dict."""
    return json.loads(_core.double_text(source))
