"""Selects the enumeration kernel: compiled extension if built, else pure Python.

Set ``WVCOUNT_PURE=1`` in the environment to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

_compiled = None
if not os.environ.get("WVCOUNT_PURE"):
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None


def kernel_name() -> str:
    return "cython" if _compiled is not None else "python"


def answer_sets_masks(heads, bpos, bneg, n_atoms):
    if _compiled is not None and n_atoms <= 62:
        return _compiled.answer_sets_masks(heads, bpos, bneg, n_atoms)
    return _kernel_py.answer_sets_masks(heads, bpos, bneg, n_atoms)
