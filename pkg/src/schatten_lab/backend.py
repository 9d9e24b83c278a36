"""Eigensolver kernel selection.

Prefers the compiled Jacobi kernel, falling back to the pure-Python twin.
Set SCHATTEN_LAB_BACKEND=python (or =cython) to force a choice at import.
"""

import os

from schatten_lab import _jacobi_py

try:
    from schatten_lab import _jacobi as _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("SCHATTEN_LAB_BACKEND", "auto").strip().lower()
if _forced in ("", "auto"):
    _impl = _compiled if _compiled is not None else _jacobi_py
elif _forced == "python":
    _impl = _jacobi_py
elif _forced == "cython":
    if _compiled is None:
        raise ImportError(
            "SCHATTEN_LAB_BACKEND=cython but the compiled kernel is not built")
    _impl = _compiled
else:
    raise ImportError(f"unknown SCHATTEN_LAB_BACKEND={_forced!r}")

BACKEND = "cython" if _impl is _compiled else "python"

jacobi_eigh = _impl.jacobi_eigh


def get_backend() -> str:
    """Name of the active eigensolver kernel: 'cython' or 'python'."""
    return BACKEND
