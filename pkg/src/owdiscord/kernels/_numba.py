"""numba backend: a private copy of ``_python`` with its functions compiled."""

import importlib.util
import sys

import numba

from . import _python


def _clone_module(module):
    spec = importlib.util.spec_from_file_location(module.__name__ + "_jit", module.__file__)
    clone = importlib.util.module_from_spec(spec)
    sys.modules[spec.name] = clone
    spec.loader.exec_module(clone)
    return clone


MODULE = _clone_module(_python)

_jit = numba.njit(cache=True, nogil=True)

MODULE.coisometry = coisometry = _jit(MODULE.coisometry)
MODULE._xlogx_sum = _jit(MODULE._xlogx_sum)
MODULE.average_conditional = average_conditional = _jit(MODULE.average_conditional_loops)
MODULE.nelder_mead = nelder_mead = _jit(MODULE.nelder_mead)
multistart = _jit(MODULE.multistart)

CUTOFF = MODULE.CUTOFF
MODE_ENTROPY = MODULE.MODE_ENTROPY
MODE_CONCURRENCE = MODULE.MODE_CONCURRENCE
