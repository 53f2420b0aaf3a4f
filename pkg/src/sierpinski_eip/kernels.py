"""Backend selection for the subset-sweep kernels.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``SIERPINSKI_EIP_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pysweep

try:
    if os.environ.get("SIERPINSKI_EIP_PURE", "") not in ("", "0"):
        raise ImportError("fallback forced by SIERPINSKI_EIP_PURE")
    from . import _csweep as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl: ModuleType = _compiled if _compiled is not None else _pysweep

sweep_range = _impl.sweep_range
gray_checkpoints = _impl.gray_checkpoints


def get_backend(name: str | None = None) -> ModuleType:
    """Return a specific backend module ('cython' or 'python'), or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pysweep
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]
