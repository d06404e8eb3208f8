"""Hot inner loops with two interchangeable backends.

The backend is picked once at import time from the ``FTGFMUL_BACKEND``
environment variable:

* ``numba`` (default when numba imports) - ``@njit`` compiled loops;
* ``numpy`` - vectorised pure-numpy fallback, no compiler needed.

Both modules stay importable directly (``numpy_impl`` / ``numba_impl``) so
tests and the benchmark can compare them side by side.
"""
import os

from . import numpy_impl

_requested = os.environ.get("FTGFMUL_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"FTGFMUL_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

impl = numpy_impl
BACKEND = "numpy"
if _requested == "numba":
    try:
        from . import numba_impl
    except ImportError:  # numba not installed
        numba_impl = None
    else:
        impl = numba_impl
        BACKEND = "numba"

clmul_reduce = impl.clmul_reduce
odd_syndromes = impl.odd_syndromes
poly_eval_powers = impl.poly_eval_powers
eval_packed = impl.eval_packed

__all__ = ["BACKEND", "clmul_reduce", "odd_syndromes", "poly_eval_powers", "eval_packed"]
