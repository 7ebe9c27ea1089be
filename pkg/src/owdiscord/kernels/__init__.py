"""Backend selection for the measurement-optimization kernels.

The numba backend is used when importable. Set ``OWDISCORD_NUMBA=0`` to force
the plain numpy path (same algorithm, same source, much slower).
"""

import os

from . import _python

BACKEND = "numpy"
if os.environ.get("OWDISCORD_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off"):
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = _python
else:
    _impl = _python

coisometry = _impl.coisometry
average_conditional = _impl.average_conditional
nelder_mead = _impl.nelder_mead
multistart = _impl.multistart

MODE_ENTROPY = _python.MODE_ENTROPY
MODE_CONCURRENCE = _python.MODE_CONCURRENCE
CUTOFF = _python.CUTOFF

__all__ = [
    "BACKEND",
    "coisometry",
    "average_conditional",
    "nelder_mead",
    "multistart",
    "MODE_ENTROPY",
    "MODE_CONCURRENCE",
]
