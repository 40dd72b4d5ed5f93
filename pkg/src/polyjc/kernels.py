"""Kernel backend selection.

The compiled extension ``polyjc._kernels`` is preferred; the pure-Python
module is used when it is missing or when ``POLYJC_PURE`` is set to a
non-empty value other than ``0``.
"""
import os

from . import _kernels_py

_force_pure = os.environ.get("POLYJC_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

mul_terms = _impl.mul_terms
mul_terms_trunc = _impl.mul_terms_trunc
sub_mul_term = _impl.sub_mul_term
box_search = _impl.box_search

__all__ = ["BACKEND", "mul_terms", "mul_terms_trunc", "sub_mul_term", "box_search"]
