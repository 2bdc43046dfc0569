"""Kernel backend selection.

The env flag HKIT_NUMBA picks the lane:
  unset / "auto"        -> numba when importable, else numpy
  "1" / "true" / "on"   -> numba (raises if numba is unavailable)
  "0" / "false" / "off" -> pure numpy
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels as _numpy_kernels

_TRUE = {"1", "true", "on", "yes"}
_FALSE = {"0", "false", "off", "no"}


def _load(flag: str) -> tuple[ModuleType, str]:
    if flag in _FALSE:
        return _numpy_kernels, "numpy"
    try:
        from . import _kernels_numba as _nb
    except ImportError:
        if flag in _TRUE:
            raise ImportError("HKIT_NUMBA requested numba, but numba is not importable")
        return _numpy_kernels, "numpy"
    return _nb, "numba"


_flag = os.environ.get("HKIT_NUMBA", "auto").strip().lower()
kernels, BACKEND = _load(_flag)


def get_kernels(name: str) -> ModuleType:
    """Return a kernel module by lane name ("numpy" or "numba")."""
    if name == "numpy":
        return _numpy_kernels
    if name == "numba":
        from . import _kernels_numba as _nb

        return _nb
    raise ValueError(f"unknown kernel backend {name!r}")
