"""Select the compiled kernels when available, else the pure-Python mirror.

Set ``BLASCHKE_TONGUES_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

kernels = _fallback
NAME = "python"

if os.environ.get("BLASCHKE_TONGUES_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as kernels  # noqa: F811
        NAME = "cython"
    except ImportError:
        pass

# codes shared by both backends
DEGENERATE = _fallback.DEGENERATE
ESCAPE = _fallback.ESCAPE
ZERO = _fallback.ZERO
CIRCLE = _fallback.CIRCLE
OFF = _fallback.OFF
UNDECIDED = _fallback.UNDECIDED


def get(name: str | None = None):
    """Kernel module by name (``"cython"`` or ``"python"``); default is the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _fallback
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
