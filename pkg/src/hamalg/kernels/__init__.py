"""Kernel selection: compiled Cython implementation when available,
pure-Python fallback otherwise.

Set the environment variable ``HAMALG_PURE=1`` to force the fallback
(useful for debugging and for the kernel benchmark).
"""

import os

if os.environ.get("HAMALG_PURE"):
    from .poly_py import mul, poisson

    BACKEND = "python"
else:
    try:
        from .poly_cy import mul, poisson  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from .poly_py import mul, poisson  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["mul", "poisson", "BACKEND"]
