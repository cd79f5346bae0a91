"""Kernel backend selection.

The compiled extension is used when it built; set GAIDS_PURE_PYTHON=1 to
force the numpy fallback. Either backend is fully deterministic on its own;
see _kernels_py for the cross-backend ulp caveat.
"""

from __future__ import annotations

import os


def _resolve(force_python: bool = False):
    if force_python or os.environ.get("GAIDS_PURE_PYTHON"):
        from . import _kernels_py

        return _kernels_py
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    except ImportError:
        from . import _kernels_py

        return _kernels_py


_impl = _resolve()

BACKEND: str = _impl.BACKEND
distance = _impl.distance
nearest_centroid = _impl.nearest_centroid
batch_fitness = _impl.batch_fitness
