"""Kernel backend selection.

The compiled extension is used when importable; the pure-Python fallback keeps
the package functional otherwise.  Set PA_LAB_BACKEND=python or =compiled to
force a choice at import time (tests and the benchmark bypass this and import
both modules directly).
"""

from __future__ import annotations

import os

from pa_lab import _kernels_py

try:
    from pa_lab import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_forced = os.environ.get("PA_LAB_BACKEND")
if _forced is None:
    kernels = _compiled if _compiled is not None else _kernels_py
elif _forced == "python":
    kernels = _kernels_py
elif _forced == "compiled":
    if _compiled is None:
        raise ImportError("PA_LAB_BACKEND=compiled but the extension is not built")
    kernels = _compiled
else:
    raise ImportError(f"unknown PA_LAB_BACKEND value: {_forced!r}")


def backend_name() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return kernels.backend_name()
