"""Pure and mixed states, Schmidt forms, purification and the Q purity measure.

Density matrices are plain complex ndarrays; :func:`check_density` validates
them where a caller needs the guarantee.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import null_space

from .tensor import (
    BipartiteDims,
    DimensionError,
    HERM_TOL,
    CLIP_EPS,
    SUPPORT_EPS,
    as_matrix,
    dagger,
    herm_eig,
    is_unitary,
    max_abs,
)

NORM_TOL = 1e-10
RANK_EPS = 1e-12


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class BipartitePureState:
    amplitudes: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.dims.total:
            raise DimensionError(
                f"{amps.size} amplitudes do not fit a {self.dims.n_alpha}x{self.dims.n_beta} system"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    def matrix(self) -> np.ndarray:
        """Amplitudes as an N x M coefficient matrix."""
        return self.amplitudes.reshape(self.dims.n_alpha, self.dims.n_beta)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    def reduced(self, keep: str = "alpha") -> np.ndarray:
        psi = self.matrix()
        if keep == "alpha":
            return psi @ dagger(psi)
        if keep == "beta":
            return (dagger(psi) @ psi).T
        raise ValueError(f"keep must be 'alpha' or 'beta', got {keep!r}")


@dataclass(frozen=True)
class SchmidtForm:
    """sum_j c_j exp(i phi_j) |alpha_j>|beta_j>.

    ``alpha_basis`` is N x n and ``beta_basis`` is M x n; columns are the
    Schmidt vectors. ``rank`` counts coefficients above 1e-12.
    """

    coeffs: np.ndarray
    phases: np.ndarray
    alpha_basis: np.ndarray
    beta_basis: np.ndarray
    rank: int

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(self.alpha_basis.shape[0], self.beta_basis.shape[0])

    def state(self) -> BipartitePureState:
        w = self.coeffs * np.exp(1j * self.phases)
        psi = (self.alpha_basis * w) @ self.beta_basis.T
        return BipartitePureState(psi.reshape(-1), self.dims)

    def with_coeffs(self, coeffs) -> "SchmidtForm":
        """Same frame (bases and phases), different amplitudes."""
        c = np.asarray(coeffs, dtype=float)
        if c.shape != self.coeffs.shape:
            raise DimensionError(f"expected {self.n} coefficients, got {c.size}")
        return replace(self, coeffs=c, rank=int(np.count_nonzero(c > RANK_EPS)))


def make_schmidt_form(coeffs, alpha_basis, beta_basis, phases=None) -> SchmidtForm:
    c = np.asarray(coeffs, dtype=float)
    a = as_matrix(alpha_basis)
    b = as_matrix(beta_basis)
    if np.any(c < 0):
        raise InvalidStateError("Schmidt coefficients must be nonnegative")
    if a.shape[1] != c.size or b.shape[1] != c.size:
        raise DimensionError("basis column counts must match the coefficient count")
    for basis in (a, b):
        if max_abs(dagger(basis) @ basis - np.eye(c.size)) > NORM_TOL:
            raise InvalidStateError("Schmidt basis columns are not orthonormal")
    if abs(np.sum(c**2) - 1.0) > NORM_TOL:
        raise InvalidStateError("squared Schmidt coefficients must sum to 1")
    ph = np.zeros(c.size) if phases is None else np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    return SchmidtForm(c, ph, a, b, int(np.count_nonzero(c > RANK_EPS)))


def schmidt_decompose(psi: BipartitePureState) -> SchmidtForm:
    """SVD-based Schmidt decomposition.

    Phases are zero; any phase is carried by the beta columns. Only
    components with coefficient above 1e-12 are kept.
    """
    u, s, vh = np.linalg.svd(psi.matrix())
    rank = max(1, int(np.count_nonzero(s > RANK_EPS)))
    return SchmidtForm(
        coeffs=s[:rank].copy(),
        phases=np.zeros(rank),
        alpha_basis=u[:, :rank].copy(),
        beta_basis=vh[:rank, :].T.copy(),
        rank=rank,
    )


def _complete(basis: np.ndarray, n_cols: int) -> np.ndarray:
    extra = n_cols - basis.shape[1]
    if extra <= 0:
        return basis
    return np.hstack([basis, null_space(dagger(basis))[:, :extra]])


def pad_schmidt(sf: SchmidtForm, n_padded: int | None = None) -> SchmidtForm:
    """Extend the Schmidt sum to ``n_padded`` terms with zero coefficients.

    Bases are completed with orthonormal vectors. When H_beta is smaller
    than ``n_padded`` it is enlarged by zero rows first.
    """
    n_alpha = sf.alpha_basis.shape[0]
    if n_padded is None:
        n_padded = n_alpha
    if n_padded < sf.rank:
        raise DimensionError(f"n_padded={n_padded} is below the Schmidt rank {sf.rank}")
    if n_padded > n_alpha:
        raise DimensionError(f"n_padded={n_padded} exceeds dim H_alpha={n_alpha}")
    keep = min(sf.n, n_padded)
    a = sf.alpha_basis[:, :keep]
    b = sf.beta_basis[:, :keep]
    if b.shape[0] < n_padded:
        b = np.vstack([b, np.zeros((n_padded - b.shape[0], keep))])
    coeffs = np.zeros(n_padded)
    coeffs[:keep] = sf.coeffs[:keep]
    phases = np.zeros(n_padded)
    phases[:keep] = sf.phases[:keep]
    return SchmidtForm(coeffs, phases, _complete(a, n_padded), _complete(b, n_padded), sf.rank)


@dataclass(frozen=True)
class PurityMeasure:
    q: float
    n_padded: int
    d: np.ndarray


def q_purity(sf: SchmidtForm, n_padded: int | None = None) -> PurityMeasure:
    """Q = sqrt(sum_j (c_j - 1/sqrt(N))^2) over the padded coefficients."""
    if n_padded is None:
        n_padded = sf.alpha_basis.shape[0]
    if n_padded < sf.rank:
        raise DimensionError(f"n_padded={n_padded} is below the Schmidt rank {sf.rank}")
    c = np.zeros(n_padded)
    keep = min(sf.n, n_padded)
    c[:keep] = sf.coeffs[:keep]
    d = c - 1.0 / np.sqrt(n_padded)
    return PurityMeasure(float(np.sqrt(np.sum(d**2))), n_padded, d)


def q_max(n: int) -> float:
    """Largest attainable Q at padded dimension n (pure states)."""
    return float(np.sqrt(2.0 - 2.0 / np.sqrt(n)))


def omega_split(sf: SchmidtForm, n_padded: int | None = None):
    """Split |Omega> into its uniform part and the normalized remainder.

    Returns ``(omega1, omega2, q)`` with |Omega> = |Omega1> + q |Omega2>.
    ``omega2`` is None when q <= 1e-12.
    """
    padded = pad_schmidt(sf, n_padded)
    pm = q_purity(padded, padded.n)
    omega1 = padded.with_coeffs(np.full(padded.n, 1.0 / np.sqrt(padded.n))).state()
    if pm.q <= RANK_EPS:
        return omega1, None, pm.q
    w = (pm.d / pm.q) * np.exp(1j * padded.phases)
    amps = ((padded.alpha_basis * w) @ padded.beta_basis.T).reshape(-1)
    return omega1, BipartitePureState(amps, padded.dims), pm.q


def purify(rho) -> BipartitePureState:
    """sum_j sqrt(lambda_j) |e_j>|j> with an ancilla of the same dimension."""
    w, v = herm_eig(rho)
    w = np.where(w > SUPPORT_EPS, w, 0.0)
    psi = v * np.sqrt(w)
    psi /= np.linalg.norm(psi)
    n = v.shape[0]
    return BipartitePureState(psi.reshape(-1), BipartiteDims(n, n))


def check_density(rho, tol: float = HERM_TOL) -> np.ndarray:
    """Validate Hermiticity, positivity and unit trace; return the matrix."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {rho.shape}")
    w, _ = herm_eig(rho, tol)
    if w[-1] < -CLIP_EPS:
        raise InvalidStateError(f"density matrix has eigenvalue {w[-1]:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"density matrix has trace {tr}")
    return rho


def von_neumann_entropy(rho) -> float:
    """-tr(rho ln rho) in nats, with 0 ln 0 = 0."""
    w, _ = herm_eig(rho)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def shannon_entropy_observable(rho, basis) -> float:
    """Shannon entropy (nats) of the outcome distribution <i|rho|i>."""
    basis = as_matrix(basis)
    if not is_unitary(basis):
        raise InvalidStateError("measurement basis must be a complete orthonormal set")
    p = np.real(np.einsum("ji,jk,ki->i", np.conj(basis), as_matrix(rho), basis))
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def maximally_entangled(n: int, phases=None) -> BipartitePureState:
    ph = np.zeros(n) if phases is None else np.asarray(phases, dtype=float)
    if ph.size != n:
        raise DimensionError(f"expected {n} phases, got {ph.size}")
    psi = np.diag(np.exp(1j * ph)) / np.sqrt(n)
    return BipartitePureState(psi.reshape(-1), BipartiteDims(n, n))


def bell_state() -> BipartitePureState:
    """(|up,down> + |down,up>)/sqrt(2) with up = |0>, down = |1>."""
    amps = np.array([0, 1, 1, 0], dtype=np.complex128) / np.sqrt(2)
    return BipartitePureState(amps, BipartiteDims(2, 2))


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128) / n


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_pure_bipartite(seed, n: int, m: int) -> BipartitePureState:
    """Uniformly random pure state on C^n x C^m."""
    rng = _rng(seed)
    v = rng.standard_normal(n * m) + 1j * rng.standard_normal(n * m)
    return BipartitePureState(v / np.linalg.norm(v), BipartiteDims(n, m))


def random_density(seed, n: int) -> np.ndarray:
    return random_pure_bipartite(seed, n, n).reduced("alpha")


def targeted_coeffs(n: int, t: float) -> np.ndarray:
    """normalize((1 - t) * uniform + t * e_1); t=0 gives Q=0, t=1 a pure state."""
    c = (1.0 - t) * np.full(n, 1.0 / np.sqrt(n))
    c[0] += t
    return c / np.linalg.norm(c)
