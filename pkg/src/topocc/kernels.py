"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``TOPOCC_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("TOPOCC_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if _impl is compiled_backend else "python"

SCANNED_LAWS = python_backend.SCANNED_LAWS
interior = _impl.interior
exp_mask = _impl.exp_mask
exp_table = _impl.exp_table
meet_join_tables = _impl.meet_join_tables
scan_laws = _impl.scan_laws
