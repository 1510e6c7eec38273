"""Hot inner loops, compiled when the extension is built.

The Cython module is used when it imports; otherwise the numpy versions in
``_pykernels`` take over. Set ``CFC_EEG_PURE=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("CFC_EEG_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

atrous_conv = _impl.atrous_conv
plv_matrix = _impl.plv_matrix

__all__ = ["BACKEND", "atrous_conv", "plv_matrix"]
