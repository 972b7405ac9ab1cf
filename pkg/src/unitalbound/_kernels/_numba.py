"""numba-compiled kernels with the same signatures as the numpy path.

Inputs must be C-contiguous complex128. Matrix products go through
numba's BLAS binding; the partial traces are explicit loops.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def ptrace_keep_alpha(rho, n, m):
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for k in range(n):
            acc = 0j
            for j in range(m):
                acc += rho[i * m + j, k * m + j]
            out[i, k] = acc
    return out


@njit(cache=True)
def ptrace_keep_beta(rho, n, m):
    out = np.zeros((m, m), dtype=np.complex128)
    for j in range(m):
        for l in range(m):
            acc = 0j
            for i in range(n):
                acc += rho[i * m + j, i * m + l]
            out[j, l] = acc
    return out


@njit(cache=True)
def apply_kraus(elems, rho):
    kk, d, _ = elems.shape
    out = np.zeros((d, d), dtype=np.complex128)
    for k in range(kk):
        e = np.ascontiguousarray(elems[k])
        out += e @ rho @ np.ascontiguousarray(np.conj(e.T))
    return out


@njit(cache=True)
def _left_alpha(e, x, n, m):
    # (E x I) @ x; rows of x are alpha-major so E acts on the leading index
    dim = x.shape[1]
    return (e @ x.reshape(n, m * dim)).reshape(n * m, dim)


@njit(cache=True)
def _left_beta(e, x, n, m):
    # (I x E) @ x: bring the beta index to the front, one GEMM, move it back
    dim = x.shape[1]
    y = np.ascontiguousarray(x.reshape(n, m, dim).transpose(1, 0, 2)).reshape(m, n * dim)
    z = (e @ y).reshape(m, n, dim)
    return np.ascontiguousarray(z.transpose(1, 0, 2)).reshape(n * m, dim)


@njit(cache=True)
def apply_kraus_alpha(elems, rho, n, m):
    # L rho L^+ = (L (L rho)^+)^+ with L = E x I
    dim = n * m
    out = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(elems.shape[0]):
        e = np.ascontiguousarray(elems[k])
        t = np.ascontiguousarray(np.conj(_left_alpha(e, rho, n, m)).T)
        out += np.conj(_left_alpha(e, t, n, m)).T
    return out


@njit(cache=True)
def apply_kraus_beta(elems, rho, n, m):
    dim = n * m
    out = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(elems.shape[0]):
        e = np.ascontiguousarray(elems[k])
        t = np.ascontiguousarray(np.conj(_left_beta(e, rho, n, m)).T)
        out += np.conj(_left_beta(e, t, n, m)).T
    return out
