"""Hot kernels: subsystem partial traces and Kraus-sum application.

Two interchangeable backends exist. The numba path is used when numba
imports and ``UNITALBOUND_NUMBA`` is not set to ``0``; otherwise the pure
numpy path is used. Both take C-contiguous complex128 arrays. Kraus application on composite
matrices larger than ``NUMBA_MAX_DIM`` always takes the numpy path, where
einsum's BLAS contraction beats the compiled loops
(see benchmarks/bench_kernels.py).
"""

import os

import numpy as np

from . import _numpy

numba_impl = None
try:
    from . import _numba as numba_impl
except ImportError:  # pragma: no cover - numba is optional
    numba_impl = None

numpy_impl = _numpy

_wanted = os.environ.get("UNITALBOUND_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
_impl = numba_impl if (_wanted and numba_impl is not None) else numpy_impl

BACKEND = "numba" if _impl is numba_impl else "numpy"
NUMBA_MAX_DIM = 48


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def ptrace_keep_alpha(rho, n, m):
    return _impl.ptrace_keep_alpha(_c(rho), n, m)


def ptrace_keep_beta(rho, n, m):
    return _impl.ptrace_keep_beta(_c(rho), n, m)


def apply_kraus(elems, rho):
    return _impl.apply_kraus(_c(elems), _c(rho))


def _composite_impl(dim):
    return _impl if dim <= NUMBA_MAX_DIM else numpy_impl


def apply_kraus_alpha(elems, rho, n, m):
    return _composite_impl(n * m).apply_kraus_alpha(_c(elems), _c(rho), n, m)


def apply_kraus_beta(elems, rho, n, m):
    return _composite_impl(n * m).apply_kraus_beta(_c(elems), _c(rho), n, m)
