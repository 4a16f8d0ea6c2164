"""Kernel backend selection: numba-compiled by default, pure NumPy on request.

Set the environment variable ``HTHS_NUMBA=0`` before import to run every hot
kernel as plain Python/NumPy.  Both paths execute the same source and draw
from the same ``numpy.random.Generator`` stream, so chains are bit-identical
across backends.
"""
from __future__ import annotations

import os


def _resolve_numba_flag() -> bool:
    flag = os.environ.get("HTHS_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _resolve_numba_flag()

if NUMBA_ENABLED:
    from numba import njit as _njit

    def maybe_njit(func=None, **kwargs):
        kwargs.setdefault("cache", True)
        if func is None:
            return _njit(**kwargs)
        return _njit(**kwargs)(func)

else:

    def maybe_njit(func=None, **kwargs):
        if func is None:
            return lambda f: f
        return func


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
