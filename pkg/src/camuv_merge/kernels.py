"""Kernel backend selection.

Two interchangeable backends implement the hot path (UCP/UBP existence and
per-dataset inconsistency counts over adjacency matrices):

* ``numba`` — jitted BFS loops (default when numba imports cleanly), and
* ``numpy`` — vectorized pure-numpy fallback.

The default is chosen once at import from the ``CAMUV_MERGE_BACKEND``
environment variable (``auto`` | ``numba`` | ``numpy``); ``set_backend``
overrides it at runtime, which the benchmark and the cross-backend tests use.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _kernels_np

ENV_VAR = "CAMUV_MERGE_BACKEND"
BACKEND_NAMES = ("numba", "numpy")

_numba_module: ModuleType | None = None
_numba_error: Exception | None = None


def _load_numba_backend() -> ModuleType:
    global _numba_module, _numba_error
    if _numba_module is None:
        if _numba_error is not None:
            raise _numba_error
        try:
            from . import _kernels_nb
        except ImportError as exc:  # numba missing or broken
            _numba_error = exc
            raise
        _numba_module = _kernels_nb
    return _numba_module


def get_backend(name: str) -> ModuleType:
    if name == "numpy":
        return _kernels_np
    if name == "numba":
        return _load_numba_backend()
    raise ValueError(f"unknown kernel backend {name!r}; expected one of {BACKEND_NAMES}")


def _initial_backend() -> ModuleType:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("", "auto"):
        try:
            return _load_numba_backend()
        except ImportError:
            return _kernels_np
    return get_backend(choice)


_active: ModuleType = _initial_backend()


def active_backend() -> str:
    return _active.NAME


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previously active name."""
    global _active
    previous = _active.NAME
    _active = get_backend(name)
    return previous


def reaches(adj: np.ndarray, src: int, dst: int) -> bool:
    return _active.reaches(adj, src, dst)


def up_exists(adj: np.ndarray, obs: np.ndarray, i: int, j: int) -> bool:
    return _active.up_exists(adj, obs, i, j)


def cost_terms(adj: np.ndarray, obs: np.ndarray, cls: np.ndarray) -> np.ndarray:
    return _active.cost_terms(adj, obs, cls)
