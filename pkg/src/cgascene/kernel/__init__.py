"""Kernel backend selection.

Prefers the compiled extension when it was built; falls back to the numpy
implementation otherwise. Set CGASCENE_KERNEL=pure to force the fallback or
CGASCENE_KERNEL=ext to require the extension.
"""
from __future__ import annotations

import os

from . import tables

_requested = os.environ.get("CGASCENE_KERNEL", "").strip().lower()
if _requested not in ("", "ext", "pure"):
    raise ValueError(f"CGASCENE_KERNEL must be 'ext' or 'pure', got {_requested!r}")

_impl = None
if _requested != "pure":
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "ext":
            raise ImportError(
                "CGASCENE_KERNEL=ext but the compiled kernel is not built; "
                "run 'python setup.py build_ext --inplace' or reinstall"
            )
        _impl = None
if _impl is None:
    from . import pure as _impl  # type: ignore[no-redef]

gp = _impl.gp
outer = _impl.outer
reverse = _impl.reverse
BACKEND = _impl.BACKEND

__all__ = ["gp", "outer", "reverse", "BACKEND", "tables"]
