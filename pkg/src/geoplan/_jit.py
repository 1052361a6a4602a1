"""Numba toggle for the hot kernels.

Every function in geoplan._kernels is written in a numba-compatible subset of
numpy and gets compiled with ``numba.njit`` at import time. Setting the
environment variable ``GEOPLAN_NO_NUMBA=1`` (or any non-empty value other
than "0") before import selects the pure-numpy fallback path instead; the
same source runs uncompiled. The flag must be set before the first geoplan
import because the binding happens at module load.
"""

import os

ENV_FLAG = "GEOPLAN_NO_NUMBA"


def _jit_requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip() in ("", "0")


NUMBA_ACTIVE = False

if _jit_requested():
    try:
        from numba import njit as _njit

        NUMBA_ACTIVE = True
    except ImportError:
        NUMBA_ACTIVE = False

if NUMBA_ACTIVE:

    def kernel(fn):
        """Compile a hot kernel with numba in nopython mode."""
        return _njit(cache=True)(fn)

else:

    def kernel(fn):
        """Fallback: run the kernel as plain Python/numpy."""
        return fn
