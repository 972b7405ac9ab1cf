"""Numerical verification of the purity bound on observable dynamics under
unital, trace-preserving quantum operations."""

from ._kernels import BACKEND

__version__ = "0.1.0"
