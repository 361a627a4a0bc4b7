"""Backend selector for the hot kernels.

Prefers the compiled Cython extension; falls back to the pure-numpy
implementation when the extension was not built (or when the
``MOPLS_PURE_PYTHON`` environment variable is set to a non-empty value).
"""

import os

if os.environ.get("MOPLS_PURE_PYTHON"):
    from mopls import _kernels_py as _impl
else:
    try:
        from mopls import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from mopls import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
nondominated_mask = _impl.nondominated_mask
hv2d = _impl.hv2d
hv2d_improvements = _impl.hv2d_improvements
