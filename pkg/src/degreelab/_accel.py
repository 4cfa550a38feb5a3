"""JIT plumbing: numba-compiled kernels with a pure-numpy escape hatch.

Set DEGREELAB_NO_NUMBA=1 to force the numpy fallback paths everywhere.
"""

import os

_flag = os.environ.get("DEGREELAB_NO_NUMBA", "").strip().lower()
JIT_DISABLED = _flag not in ("", "0", "false", "no")

if not JIT_DISABLED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

if not HAVE_NUMBA:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap
