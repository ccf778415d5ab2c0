"""Kernel selection.

The compiled extension is preferred when importable; otherwise the
pure-Python twin takes over.  Setting HHX_PURE_PYTHON=1 forces the fallback,
which is how the benchmark gets a fair comparison.  The compiled integer
path stages values in 64 bits and signals KernelOverflow when entries grow
past its guard; such matrices are rerun with arbitrary-precision integers.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("HHX_PURE_PYTHON"):
    impl = _kernel_py
else:
    try:
        from . import _kernel_c as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _kernel_py

KERNEL_TAG = impl.KERNEL_TAG

if impl is _kernel_py:
    rank_int = impl.rank_int
    rank_fp = impl.rank_fp
    rref_int = impl.rref_int
    rref_fp = impl.rref_fp
else:
    _overflow = impl.KernelOverflow

    def rank_int(rows):
        try:
            return impl.rank_int(rows)
        except _overflow:
            return _kernel_py.rank_int(rows)

    def rref_int(rows):
        try:
            return impl.rref_int(rows)
        except _overflow:
            return _kernel_py.rref_int(rows)

    rank_fp = impl.rank_fp
    rref_fp = impl.rref_fp
