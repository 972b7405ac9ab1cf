"""Quantum operations in Kraus form.

A channel acting on one subsystem is stored at that subsystem's dimension
and lifted to a composite space only when applied (see
:func:`apply_on_alpha`, :func:`apply_on_beta`).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .states import BipartitePureState, SchmidtForm, _rng
from .tensor import (
    BipartiteDims,
    DimensionError,
    HERM_TOL,
    as_matrix,
    dagger,
    is_unitary,
    max_abs,
)

FLAG_TOL = 1e-9


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    """rho -> sum_k E_k rho E_k^dagger.

    ``trace_preserving`` and ``unital`` are computed once at construction
    with a 1e-9 max-entry tolerance.
    """

    elements: tuple
    stack: np.ndarray = field(init=False, repr=False, compare=False)
    trace_preserving: bool = field(init=False)
    unital: bool = field(init=False)

    def __post_init__(self):
        elems = tuple(as_matrix(e) for e in self.elements)
        if not elems:
            raise ChannelError("a channel needs at least one Kraus element")
        d = elems[0].shape[0]
        for e in elems:
            if e.shape != (d, d):
                raise DimensionError(f"Kraus elements must all be {d}x{d}, got {e.shape}")
        stack = np.ascontiguousarray(np.stack(elems))
        eye = np.eye(d)
        tp = max_abs(np.einsum("kba,kbc->ac", stack.conj(), stack) - eye) <= FLAG_TOL
        un = max_abs(np.einsum("kab,kcb->ac", stack, stack.conj()) - eye) <= FLAG_TOL
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "stack", stack)
        object.__setattr__(self, "trace_preserving", bool(tp))
        object.__setattr__(self, "unital", bool(un))

    @property
    def dim(self) -> int:
        return self.stack.shape[1]

    @property
    def k(self) -> int:
        return self.stack.shape[0]

    def completeness(self) -> np.ndarray:
        """sum_k E_k^dagger E_k"""
        return np.einsum("kba,kbc->ac", self.stack.conj(), self.stack)

    def unitality(self) -> np.ndarray:
        """sum_k E_k E_k^dagger"""
        return np.einsum("kab,kcb->ac", self.stack, self.stack.conj())


def is_trace_preserving(ch: KrausChannel) -> bool:
    return ch.trace_preserving


def is_unital(ch: KrausChannel) -> bool:
    return ch.unital


def apply(ch: KrausChannel, rho) -> np.ndarray:
    """Apply the channel to a matrix of matching dimension.

    No trace check is made, so non-trace-preserving maps return their
    unnormalized output.
    """
    rho = as_matrix(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionError(f"channel of dim {ch.dim} applied to matrix of shape {rho.shape}")
    return _kernels.apply_kraus(ch.stack, rho)


def apply_on_alpha(ch: KrausChannel, rho, dims: BipartiteDims) -> np.ndarray:
    """sum_k (E_k x I) rho (E_k x I)^dagger"""
    if ch.dim != dims.n_alpha:
        raise DimensionError(f"channel of dim {ch.dim} cannot act on H_alpha of dim {dims.n_alpha}")
    return _kernels.apply_kraus_alpha(ch.stack, as_matrix(rho), dims.n_alpha, dims.n_beta)


def apply_on_beta(ch: KrausChannel, rho, dims: BipartiteDims) -> np.ndarray:
    """sum_k (I x E_k) rho (I x E_k)^dagger"""
    if ch.dim != dims.n_beta:
        raise DimensionError(f"channel of dim {ch.dim} cannot act on H_beta of dim {dims.n_beta}")
    return _kernels.apply_kraus_beta(ch.stack, as_matrix(rho), dims.n_alpha, dims.n_beta)


# -- constructors -----------------------------------------------------------


def unitary_channel(u) -> KrausChannel:
    u = as_matrix(u)
    if not is_unitary(u):
        raise ChannelError("unitary_channel requires a unitary matrix")
    return KrausChannel((u,))


def premeasurement_channel(basis) -> KrausChannel:
    """Perfect premeasurement: rank-1 projectors onto the columns of ``basis``."""
    basis = as_matrix(basis)
    if not is_unitary(basis):
        raise ChannelError("premeasurement basis must be complete and orthonormal")
    return KrausChannel(tuple(np.outer(basis[:, k], np.conj(basis[:, k])) for k in range(basis.shape[1])))


def compose(e1: KrausChannel, e2: KrausChannel) -> KrausChannel:
    """e1 after e2: elements A_i B_j."""
    if e1.dim != e2.dim:
        raise DimensionError(f"cannot compose channels of dims {e1.dim} and {e2.dim}")
    return KrausChannel(tuple(a @ b for a in e1.elements for b in e2.elements))


def mixed_unitary_channel(probs, us) -> KrausChannel:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size != len(us):
        raise ChannelError("need one probability per unitary")
    if np.any(p < 0) or abs(p.sum() - 1.0) > FLAG_TOL:
        raise ChannelError(f"probabilities must be nonnegative and sum to 1, got {p}")
    mats = [as_matrix(u) for u in us]
    if not all(is_unitary(u) for u in mats):
        raise ChannelError("mixed_unitary_channel requires unitary matrices")
    return KrausChannel(tuple(np.sqrt(pi) * u for pi, u in zip(p, mats)))


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel((np.eye(n, dtype=np.complex128),))


def generalized_measurement_example() -> KrausChannel:
    """M1 = |0><0|, M2 = |0><1|: trace preserving but not unital."""
    m1 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    m2 = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    return KrausChannel((m1, m2))


def haar_unitary(seed, n: int) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with R's diagonal phases removed."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    rng = _rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_tp_channel(seed, n: int, k: int) -> KrausChannel:
    """Generic trace-preserving channel from a random isometry; almost never unital."""
    rng = _rng(seed)
    v = haar_unitary(rng, n * k)[:, :n]
    return KrausChannel(tuple(v[i * n:(i + 1) * n, :] for i in range(k)))


# -- envariance --------------------------------------------------------------


@dataclass(frozen=True)
class EnvariantPair:
    u_alpha: np.ndarray
    u_beta: np.ndarray
    lambdas: np.ndarray


def envariant_phase_pair(sf: SchmidtForm, lambdas, dims: BipartiteDims | None = None) -> EnvariantPair:
    """Phase rotations exp(+i lambda_j) on |alpha_j>, exp(-i lambda_j) on |beta_j>.

    Identity on the complements of the Schmidt supports.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.size != sf.rank:
        raise DimensionError(f"expected {sf.rank} phases, got {lam.size}")
    dims = dims or sf.dims
    if dims != sf.dims:
        raise DimensionError(f"Schmidt form has dims {sf.dims}, not {dims}")
    a = sf.alpha_basis[:, : sf.rank]
    b = sf.beta_basis[:, : sf.rank]

    def phase_op(basis, ph, d):
        return np.eye(d) + (basis * (np.exp(1j * ph) - 1.0)) @ dagger(basis)

    return EnvariantPair(phase_op(a, lam, dims.n_alpha), phase_op(b, -lam, dims.n_beta), lam)


def check_envariance(u_alpha, u_beta, psi: BipartitePureState, tol: float = HERM_TOL) -> bool:
    """True iff ||(U_a x I)(I x U_b) psi - psi|| <= tol."""
    ua = as_matrix(u_alpha)
    ub = as_matrix(u_beta)
    if ua.shape != (psi.dims.n_alpha,) * 2 or ub.shape != (psi.dims.n_beta,) * 2:
        raise DimensionError("envariance factors do not match the state's subsystem dims")
    if not (is_unitary(ua) and is_unitary(ub)):
        raise ChannelError("envariance factors must be unitary")
    out = ua @ psi.matrix() @ ub.T
    return bool(np.linalg.norm(out.reshape(-1) - psi.amplitudes) <= tol)


# -- counterpart construction -------------------------------------------------


def counterpart_elements(elements, omega1: SchmidtForm, phase_sign: int = -1) -> list:
    """Beta-side partners of alpha-side operators on a maximally entangled frame.

    With mu = A^dagger E A in the alpha Schmidt basis, the partner acts on the
    beta Schmidt basis as Phi mu^T Phi^(sign) where Phi = diag(exp(i phi)).
    ``phase_sign=-1`` is the choice for which E|Omega1> equals the partner
    acting on |Omega1>; ``+1`` reproduces the other sign for comparison.
    """
    a = omega1.alpha_basis
    b = omega1.beta_basis
    phi = np.exp(1j * omega1.phases)
    right = np.conj(phi) if phase_sign < 0 else phi
    out = []
    for e in elements:
        mu = dagger(a) @ as_matrix(e) @ a
        t = (phi[:, None] * mu.T) * right[None, :]
        out.append(b @ t @ dagger(b))
    return out


def counterpart_channel(
    ch_alpha: KrausChannel,
    omega1: SchmidtForm,
    *,
    phase_sign: int = -1,
    check: bool = True,
    tol: float = FLAG_TOL,
) -> KrausChannel:
    """Channel on H_beta that acts on |Omega1> exactly as ``ch_alpha`` does on H_alpha.

    ``omega1`` must have all coefficients equal (maximally entangled over its
    frame). If H_beta is larger than the frame, one extra element, the
    projector onto the unused part of H_beta, is appended; it annihilates
    |Omega1> and makes the map trace preserving on all of H_beta whenever
    ``ch_alpha`` is unital.

    With ``check`` the element-wise identity is verified to ``tol`` and a
    :class:`ChannelError` raised if it fails.
    """
    n = omega1.n
    if max_abs(omega1.coeffs - 1.0 / np.sqrt(n)) > HERM_TOL:
        raise ChannelError("counterpart construction needs a maximally entangled frame")
    if ch_alpha.dim != omega1.alpha_basis.shape[0]:
        raise DimensionError(
            f"channel dim {ch_alpha.dim} does not match H_alpha dim {omega1.alpha_basis.shape[0]}"
        )
    elems = counterpart_elements(ch_alpha.elements, omega1, phase_sign)
    if check:
        err = counterpart_residual(ch_alpha.elements, elems, omega1.state())
        if err > tol:
            raise ChannelError(f"counterpart identity fails: max residual {err:.3e}")
    m = omega1.beta_basis.shape[0]
    if m > n:
        b = omega1.beta_basis
        elems.append(np.eye(m) - b @ dagger(b))
    return KrausChannel(tuple(elems))


def counterpart_residual(alpha_elems, beta_elems, psi: BipartitePureState) -> float:
    """max_k || (E_k x I) psi - (I x F_k) psi ||"""
    m = psi.matrix()
    worst = 0.0
    for ea, eb in zip(alpha_elems, beta_elems):
        diff = as_matrix(ea) @ m - m @ as_matrix(eb).T
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


# -- random unital channels ----------------------------------------------------

CHANNEL_KINDS = ("unitary", "premeasurement", "mixed-unitary", "composed")


def random_unital_channel(seed, n: int, kind: str) -> KrausChannel:
    rng = _rng(seed)
    if kind == "unitary":
        return unitary_channel(haar_unitary(rng, n))
    if kind == "premeasurement":
        return premeasurement_channel(haar_unitary(rng, n))
    if kind == "mixed-unitary":
        k = int(rng.integers(2, 7))
        p = rng.dirichlet(np.ones(k))
        return mixed_unitary_channel(p, [haar_unitary(rng, n) for _ in range(k)])
    if kind == "composed":
        pm = premeasurement_channel(haar_unitary(rng, n))
        return compose(unitary_channel(haar_unitary(rng, n)), pm)
    raise ValueError(f"unknown channel kind {kind!r}")
