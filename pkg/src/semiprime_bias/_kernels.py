"""Kernel backend selection.

Prefers the compiled Cython extension when it importable; falls back to
the numpy implementation. Set SPB_FORCE_PY=1 to force the fallback (used
by the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("SPB_FORCE_PY"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
mark_composites = _impl.mark_composites
prefix_counts = _impl.prefix_counts
