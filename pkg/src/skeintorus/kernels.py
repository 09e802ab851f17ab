"""Kernel backend selection.

The compiled extension is preferred when importable; set SKEINTORUS_PURE=1
to force the pure-Python kernels.  ``get_backend`` lets callers (the
benchmark in particular) pin a backend explicitly.
"""

import os

from . import _kernels_py


def _load_compiled():
    try:
        from . import _fastkernels
        return _fastkernels
    except ImportError:
        return None


def get_backend(name=None):
    """Return a kernel module: name in {None/'auto', 'python', 'c'}."""
    if name in (None, "auto"):
        if os.environ.get("SKEINTORUS_PURE"):
            return _kernels_py
        return _load_compiled() or _kernels_py
    if name == "python":
        return _kernels_py
    if name == "c":
        mod = _load_compiled()
        if mod is None:
            raise RuntimeError("compiled kernels are not available")
        return mod
    raise ValueError(f"unknown kernel backend {name!r}")


_active = get_backend()
BACKEND = _active.BACKEND
padd = _active.padd
pmul = _active.pmul
pmuladd = _active.pmuladd
skein_fma = _active.skein_fma
