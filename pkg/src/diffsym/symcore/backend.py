"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``DIFFSYM_PURE=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("DIFFSYM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as K  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        K = None
if BACKEND == "python":
    from . import _kernels_py as K  # noqa: F811

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

ZERO = Q(0)
ONE = Q(1)

__all__ = ["K", "BACKEND", "Q", "ZERO", "ONE"]
