"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``HMCT_PURE_PYTHON=1`` to
force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("HMCT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        _impl = _compiled

sos_gains = _impl.sos_gains
tdl_apply = _impl.tdl_apply
fold_product = _impl.fold_product

BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl

__all__ = ["BACKEND", "BACKENDS", "sos_gains", "tdl_apply", "fold_product"]
