"""Kernel backend selection: compiled extension when available, NumPy otherwise.

Set ``PREPOS_PURE_PYTHON=1`` to force the NumPy kernels even when the
compiled module is importable.
"""

import os

if os.environ.get("PREPOS_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _speedups as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
