"""Pure-numpy kernels. Reference path, always available."""

import numpy as np


def ptrace_keep_alpha(rho, n, m):
    return np.trace(rho.reshape(n, m, n, m), axis1=1, axis2=3)


def ptrace_keep_beta(rho, n, m):
    return np.trace(rho.reshape(n, m, n, m), axis1=0, axis2=2)


def apply_kraus(elems, rho):
    # elems: (K, d, d)
    return np.einsum("kab,bc,kdc->ad", elems, rho, elems.conj(), optimize=True)


def apply_kraus_alpha(elems, rho, n, m):
    r = rho.reshape(n, m, n, m)
    out = np.einsum("kai,ijbl,kcb->ajcl", elems, r, elems.conj(), optimize=True)
    return out.reshape(n * m, n * m)


def apply_kraus_beta(elems, rho, n, m):
    r = rho.reshape(n, m, n, m)
    out = np.einsum("kaj,ijlb,kcb->ialc", elems, r, elems.conj(), optimize=True)
    return out.reshape(n * m, n * m)
