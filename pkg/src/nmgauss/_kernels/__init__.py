"""Kernel backend selection.

The compiled extension is used when it imports; otherwise (or when the
environment variable ``NMGAUSS_PURE_PYTHON`` is set to a non-empty value other
than ``0``) the pure-Python twin is used. Both expose the same functions, and
:func:`get_backend` returns either explicitly for tests and benchmarks.
"""

import ctypes
import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_INTEGRANDS = ("ohmic_density", "ohmic_noise_bose", "ohmic_noise_high_t")


class _Backend:
    def __init__(self, name, module):
        self.name = name
        self._module = module
        self.conditional_det = module.conditional_det
        self.conditional_det_grid = module.conditional_det_grid

    def integrand(self, name, temperature=0.0):
        """Return a ``quad``-compatible integrand ``f(omega)``.

        For the compiled backend this is a ``LowLevelCallable``; the returned
        object keeps its parameter buffer alive.
        """
        if name not in _INTEGRANDS:
            raise KeyError(name)
        if self._module is _pykernels:
            fn = getattr(_pykernels, name)
            return lambda w: fn(w, temperature)
        from scipy import LowLevelCallable

        buf = np.array([temperature], dtype=np.float64)
        ptr = ctypes.cast(buf.ctypes.data, ctypes.c_void_p)
        llc = LowLevelCallable.from_cython(self._module, name, ptr)
        return _KeepAlive(llc, buf)


class _KeepAlive:
    # LowLevelCallable is a tuple subclass; keep the buffer next to it
    __slots__ = ("callable", "buffer")

    def __init__(self, callable_, buffer):
        self.callable = callable_
        self.buffer = buffer


def _pure_forced():
    flag = os.environ.get("NMGAUSS_PURE_PYTHON", "")
    return flag not in ("", "0")


PYTHON = _Backend("python", _pykernels)
COMPILED = _Backend("cython", _ckernels) if _ckernels is not None else None
ACTIVE = PYTHON if (COMPILED is None or _pure_forced()) else COMPILED
BACKEND = ACTIVE.name


def get_backend(name=None):
    """Return the named backend (``"python"`` / ``"cython"``) or the active one."""
    if name is None:
        return ACTIVE
    if name == "python":
        return PYTHON
    if name == "cython":
        if COMPILED is None:
            raise ImportError("compiled kernels are not built")
        return COMPILED
    raise ValueError(f"unknown backend {name!r}")


def quad_func(f):
    """Unwrap an integrand produced by :meth:`_Backend.integrand` for ``quad``."""
    return f.callable if isinstance(f, _KeepAlive) else f
