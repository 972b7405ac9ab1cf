"""Dense complex-matrix kernel.

Matrices are plain ``numpy.ndarray`` of dtype complex128. Composite
indices follow the alpha-major convention: basis vector |a_i>|b_j> sits at
flat index ``i * M + j``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

HERM_TOL = 1e-10
CLIP_EPS = 1e-12
# eigenvalues below this are treated as zero when only the support matters;
# eigh noise on unit-trace matrices is ~1e-16, and its square root would
# otherwise leak ~1e-8 into amplitudes
SUPPORT_EPS = 1e-13


class DimensionError(ValueError):
    """Shapes do not match the declared bipartition or operand sizes."""


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteDims:
    n_alpha: int
    n_beta: int

    def __post_init__(self):
        if self.n_alpha < 1 or self.n_beta < 1:
            raise DimensionError(f"subsystem dims must be >= 1, got {self}")

    @property
    def total(self) -> int:
        return self.n_alpha * self.n_beta


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def max_abs(a) -> float:
    """Max-entry norm."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def is_hermitian(h, tol: float = HERM_TOL) -> bool:
    h = as_matrix(h)
    return h.shape[0] == h.shape[1] and max_abs(h - dagger(h)) <= tol


def is_unitary(u, tol: float = HERM_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def partial_trace(m, dims: BipartiteDims, keep: str = "alpha") -> np.ndarray:
    """Reduced matrix of subsystem ``keep`` ("alpha" or "beta")."""
    m = as_matrix(m)
    if m.shape != (dims.total, dims.total):
        raise DimensionError(
            f"matrix of shape {m.shape} does not match bipartition "
            f"{dims.n_alpha}x{dims.n_beta}"
        )
    if keep == "alpha":
        return _kernels.ptrace_keep_alpha(m, dims.n_alpha, dims.n_beta)
    if keep == "beta":
        return _kernels.ptrace_keep_beta(m, dims.n_alpha, dims.n_beta)
    raise ValueError(f"keep must be 'alpha' or 'beta', got {keep!r}")


def herm_eig(h, tol: float = HERM_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues in descending order and ``v`` the
    matching unitary, so that ``h == v @ diag(w) @ v^dagger``. The input is
    symmetrized before decomposition.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    err = max_abs(h - dagger(h))
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |H - H^+| = {err:.3e})")
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(h, clip: float = CLIP_EPS) -> np.ndarray:
    w, v = herm_eig(h)
    if w.size and w[-1] < -clip:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]:.3e} < -{clip:g}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ dagger(v)


def psd_factor(h, support_eps: float = SUPPORT_EPS):
    """R with R R^dagger = h, keeping only eigenvalues above ``support_eps``."""
    w, v = herm_eig(h)
    if w.size and w[-1] < -CLIP_EPS:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]:.3e} < -{CLIP_EPS:g}")
    keep = w > support_eps
    return v[:, keep] * np.sqrt(w[keep])


def matrix_abs(x) -> np.ndarray:
    """|X| = sqrt(X^dagger X)."""
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise DimensionError(f"expected a square matrix, got {x.shape}")
    return psd_sqrt(dagger(x) @ x)


def abs_hermitian(h) -> np.ndarray:
    """|H| through the eigenvalues of H directly; H must be Hermitian."""
    w, v = herm_eig(h)
    return (v * np.abs(w)) @ dagger(v)
