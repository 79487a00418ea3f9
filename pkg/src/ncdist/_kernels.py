"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when it is
not built or when ``NCDIST_PURE_PYTHON`` is set to a non-empty value.
"""
import os

from ncdist import _pycore

if os.environ.get("NCDIST_PURE_PYTHON"):
    _core = None
else:
    try:
        from ncdist import _core
    except ImportError:
        _core = None

impl = _core if _core is not None else _pycore
BACKEND = "compiled" if _core is not None else "python"

jacobi_eigh = impl.jacobi_eigh
longest_paths_from = impl.longest_paths_from
bellman_ford = impl.bellman_ford


def available_backends():
    """Name -> module for every backend importable in this process."""
    out = {"python": _pycore}
    if _core is not None:
        out["compiled"] = _core
    return out
