"""Select the compiled kernels when importable, else the pure-Python ones.

Set ``SUPERTRACE_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("SUPERTRACE_PURE", "") not in ("", "0"):
    from . import _kernels as kernels
else:
    try:
        from . import _ckernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels as kernels

BACKEND = "cython" if kernels.__name__.endswith("_ckernels") else "python"

poly_mul = kernels.poly_mul
merge_parity = kernels.merge_parity
rank_exact = kernels.rank_exact
BOS_BITS = kernels.BOS_BITS

__all__ = ["BACKEND", "BOS_BITS", "merge_parity", "poly_mul", "rank_exact"]
