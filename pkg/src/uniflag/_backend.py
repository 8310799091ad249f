"""Kernel selection: compiled extension when available, numpy otherwise.

Set UNIFLAG_PURE_PYTHON=1 before import to force the fallback (used by
the benchmark and by the backend-equivalence tests).
"""

import os

if os.environ.get("UNIFLAG_PURE_PYTHON"):
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]
        BACKEND = "python"


def backend_name() -> str:
    """Which scan kernel is active: "compiled" or "python"."""
    return BACKEND
