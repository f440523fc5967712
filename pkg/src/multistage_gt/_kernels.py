"""Kernel dispatch.

The numba backend is used when numba imports cleanly, unless the environment
variable ``MULTISTAGE_GT_DISABLE_NUMBA`` is set to a truthy value, in which
case the pure-numpy fallback is used. The choice is made once at import.
"""

from __future__ import annotations

import os

_FLAG = "MULTISTAGE_GT_DISABLE_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


BACKEND = "numpy"
if not _numba_disabled():
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover
        from . import _kernels_numpy as _impl
else:
    from . import _kernels_numpy as _impl

or_columns = _impl.or_columns
covered = _impl.covered
partner_mask = _impl.partner_mask
consistent_edges = _impl.consistent_edges
pool_hits = _impl.pool_hits

__all__ = ["BACKEND", "or_columns", "covered", "partner_mask", "consistent_edges", "pool_hits"]
