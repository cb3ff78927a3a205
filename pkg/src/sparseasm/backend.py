"""Kernel backend selection: compiled extension with numpy fallback.

The compiled kernels are preferred; set SPARSE_ASM_BACKEND=python (or
=c) to force a choice, e.g. for the backend-comparison benchmark.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels
except ImportError:
    _kernels = None

_FORCED = os.environ.get("SPARSE_ASM_BACKEND", "").strip().lower()
_default: str | None = None


def set_default(name: str | None) -> None:
    """Process-wide override, e.g. from the CLI --backend flag."""
    global _default
    _default = name


def get(name: str | None = None):
    """Return a kernels module by name ('c', 'python', or None=auto)."""
    if name is None:
        name = _default or _FORCED or ("c" if _kernels is not None else "python")
    if name in ("c", "compiled"):
        if _kernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _kernels
    if name in ("python", "py"):
        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    return ["c", "python"] if _kernels is not None else ["python"]


def name() -> str:
    return get().BACKEND
