"""Selects the kernel-sum implementation at import time.

The compiled extension is used when available; the numpy fallback otherwise.
``SIDMETRICS_BACKEND=python|native`` overrides the choice, and tests or
benchmarks can switch explicitly via :func:`set_backend`.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_native: ModuleType | None
try:
    from . import _kernels as _native_module

    _native = _native_module
except ImportError:
    _native = None

_BACKENDS: dict[str, ModuleType] = {"python": _kernels_py}
if _native is not None:
    _BACKENDS["native"] = _native


def _initial() -> str:
    forced = os.environ.get("SIDMETRICS_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"SIDMETRICS_BACKEND={forced!r} unavailable; have {sorted(_BACKENDS)}"
            )
        return forced
    return "native" if _native is not None else "python"


_active_name = _initial()


def active_backend() -> str:
    """Name of the backend currently answering kernel sums."""
    return _active_name


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {sorted(_BACKENDS)}")
    _active_name = name


def get(name: str | None = None) -> ModuleType:
    return _BACKENDS[name or _active_name]
