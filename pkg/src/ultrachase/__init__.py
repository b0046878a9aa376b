"""Exact non-Archimedean operator norms, Chase witnesses and the finite
ideal/ultrafilter combinatorics around them."""

from .kernels import BACKEND as KERNEL_BACKEND
from .valuation import ONE, ZERO, NormValue, Scalar, nv_between, pos, t

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "ONE", "ZERO", "NormValue", "Scalar", "nv_between", "pos", "t"]
