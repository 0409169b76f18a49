"""Kernel backend selection.

The compiled extension is preferred; set ``RELLOC_PURE=1`` to force the
numpy fallback (the test-suite exercises both).
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("RELLOC_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

bfs_distances = _impl.bfs_distances
update_candidates = _impl.update_candidates
masked_eccentricity = _impl.masked_eccentricity

__all__ = ["BACKEND", "bfs_distances", "update_candidates", "masked_eccentricity"]
