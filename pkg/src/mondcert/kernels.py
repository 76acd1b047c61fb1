"""Select the compiled kernels when available, else the pure-Python ones.

Set ``MONDCERT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("MONDCERT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

axpy = _impl.axpy
axpy_mod = _impl.axpy_mod
find_divisor = _impl.find_divisor
find_divisors = _impl.find_divisors
reduce_row = _impl.reduce_row


def backends() -> dict[str, object]:
    """All importable kernel implementations, keyed by name (for benchmarks)."""
    out: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        out["cython"] = _compiled
    return out
