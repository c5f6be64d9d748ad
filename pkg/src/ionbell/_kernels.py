"""Kernel backend selection.

The compiled extension is used when it imports; set ``IONBELL_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("IONBELL_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

sideband_propagate = _impl.sideband_propagate
apply_phases = _impl.apply_phases
