"""Trace distance, fidelity, the Helstrom projector and the purity bound."""

from dataclasses import dataclass

import numpy as np

from .channels import ChannelError, KrausChannel, apply_on_alpha, apply_on_beta, counterpart_channel
from .states import SchmidtForm, pad_schmidt, q_purity
from .tensor import (
    BipartiteDims,
    DimensionError,
    as_matrix,
    dagger,
    herm_eig,
    partial_trace,
    psd_factor,
)


def _pair(rho, sigma):
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    if rho.shape != sigma.shape or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"cannot compare matrices of shapes {rho.shape} and {sigma.shape}")
    return rho, sigma


def trace_distance(rho, sigma) -> float:
    """D = tr|rho - sigma| / 2. Inputs need only be Hermitian."""
    rho, sigma = _pair(rho, sigma)
    w, _ = herm_eig(rho - sigma)
    return 0.5 * float(np.sum(np.abs(w)))


def helstrom_projector(rho, sigma):
    """Projector onto the nonnegative eigenspace of rho - sigma, and tr[P(rho - sigma)]."""
    rho, sigma = _pair(rho, sigma)
    delta = rho - sigma
    w, v = herm_eig(delta)
    pos = v[:, w >= 0.0]
    p = pos @ dagger(pos)
    return p, float(np.real(np.trace(p @ delta)))


def fidelity(rho, sigma) -> float:
    """F = tr sqrt(sqrt(rho) sigma sqrt(rho)) (not squared).

    Evaluated as the sum of singular values of sqrt(sigma) sqrt(rho) on the
    numerical supports, which avoids square roots of eigenvalue noise.
    """
    rho, sigma = _pair(rho, sigma)
    r_rho = psd_factor(rho)
    r_sigma = psd_factor(sigma)
    if r_rho.shape[1] == 0 or r_sigma.shape[1] == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(dagger(r_sigma) @ r_rho, compute_uv=False)))


def purity_bound(q: float) -> float:
    """2 sqrt(1 - |1 - q^2 + q^4/4|).

    The inner term is (1 - q^2/2)^2, so this equals 2 q sqrt(1 - q^2/4),
    which keeps full relative precision for small q.
    """
    if q < 0:
        raise ValueError(f"q must be nonnegative, got {q}")
    return 2.0 * q * float(np.sqrt(max(1.0 - 0.25 * q**2, 0.0)))


def closed_form_fidelity(q: float) -> float:
    """F(|Omega1><Omega1|, |Omega><Omega|) as a function of Q."""
    # sqrt(1 - q^2 + q^4/4) = |1 - q^2/2|
    return abs(1.0 - 0.5 * q**2)


def mixture_bound(weights, qs) -> float:
    r = np.asarray(weights, dtype=float)
    q = np.asarray(qs, dtype=float)
    if r.ndim != 1 or r.shape != q.shape:
        raise ValueError("weights and qs must be 1-d and of equal length")
    if np.any(r < 0) or abs(r.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {r}")
    return float(sum(ri * purity_bound(qi) for ri, qi in zip(r, q)))


@dataclass(frozen=True)
class BoundEvaluation:
    q: float
    d_alpha: float
    d_alphabeta: float
    bound: float
    margin_ab: float
    margin_a: float
    beta_trace: float


def evaluate_bound(sf: SchmidtForm, ch: KrausChannel, n_padded: int | None = None) -> BoundEvaluation:
    """Evaluate D_alpha <= D_alphabeta <= purity_bound(Q) for one state and channel.

    The state is padded to ``n_padded`` terms (default dim H_alpha). The
    beta-side channel is the counterpart of ``ch`` on the uniform frame of
    the padded state.
    """
    if not ch.unital:
        raise ChannelError("the purity bound only applies to unital channels")
    if not ch.trace_preserving:
        raise ChannelError("the purity bound only applies to trace-preserving channels")
    padded = pad_schmidt(sf, n_padded)
    q = q_purity(padded, padded.n).q
    frame = padded.with_coeffs(np.full(padded.n, 1.0 / np.sqrt(padded.n)))
    ch_beta = counterpart_channel(ch, frame)

    omega = padded.state()
    dims: BipartiteDims = omega.dims
    rho = omega.density()
    out_a = apply_on_alpha(ch, rho, dims)
    out_b = apply_on_beta(ch_beta, rho, dims)
    d_ab = trace_distance(out_a, out_b)

    red = partial_trace(rho, dims, keep="alpha")
    red_out = partial_trace(out_a, dims, keep="alpha")
    d_a = trace_distance(red_out, red)
    bound = purity_bound(q)
    return BoundEvaluation(
        q=q,
        d_alpha=d_a,
        d_alphabeta=d_ab,
        bound=bound,
        margin_ab=bound - d_ab,
        margin_a=d_ab - d_a,
        beta_trace=float(np.real(np.trace(out_b))),
    )
