import numpy as np
import pytest
from hypothesis import given, settings, strategies as hst

from unitalbound import channels as ch
from unitalbound import metrics as mt
from unitalbound import states as st
from unitalbound.tensor import DimensionError, NotPSDError

seeds = hst.integers(0, 2**32 - 1)
Q_THRESHOLD = np.sqrt(2 - np.sqrt(3))


def ket(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def proj(v):
    v = ket(v)
    return np.outer(v, v.conj())


# -- trace distance -------------------------------------------------------------


def test_trace_distance_examples():
    rho = np.diag([0.5, 0.5]).astype(complex)
    assert mt.trace_distance(rho, rho) == 0.0
    assert mt.trace_distance(proj([1, 0]), proj([0, 1])) == pytest.approx(1.0, abs=1e-15)
    assert mt.trace_distance(np.diag([0.75, 0.25]), rho) == pytest.approx(0.25, abs=1e-15)


def test_trace_distance_shape_mismatch():
    with pytest.raises(DimensionError):
        mt.trace_distance(np.eye(2) / 2, np.eye(3) / 3)


@given(seeds, hst.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_trace_distance_is_a_bounded_metric(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (st.random_density(rng, n) for _ in range(3))
    dab = mt.trace_distance(a, b)
    assert 0.0 <= dab <= 1.0 + 1e-12
    assert dab == pytest.approx(mt.trace_distance(b, a), abs=1e-12)
    assert dab <= mt.trace_distance(a, c) + mt.trace_distance(c, b) + 1e-12


def test_pure_state_distance_matches_overlap(rng):
    u = ket(rng.normal(size=4) + 1j * rng.normal(size=4))
    v = ket(rng.normal(size=4) + 1j * rng.normal(size=4))
    f = abs(np.vdot(u, v))
    assert mt.trace_distance(proj(u), proj(v)) == pytest.approx(np.sqrt(1 - f**2), abs=1e-12)
    assert mt.fidelity(proj(u), proj(v)) == pytest.approx(f, abs=1e-12)


# -- Helstrom projector ---------------------------------------------------------


@given(seeds, hst.integers(2, 6))
@settings(max_examples=40, deadline=None)
def test_helstrom_projector_attains_trace_distance(seed, n):
    rng = np.random.default_rng(seed)
    rho, sigma = st.random_density(rng, n), st.random_density(rng, n)
    p, val = mt.helstrom_projector(rho, sigma)
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    np.testing.assert_allclose(p, p.conj().T, atol=1e-12)
    assert val == pytest.approx(mt.trace_distance(rho, sigma), abs=1e-12)
    # any other projector does no better
    q = ch.haar_unitary(rng, n)[:, :1]
    other = np.real(np.trace(q @ q.conj().T @ (rho - sigma)))
    assert other <= val + 1e-12


def test_helstrom_projector_basis_states():
    p, val = mt.helstrom_projector(proj([1, 0]), proj([0, 1]))
    np.testing.assert_allclose(p, proj([1, 0]), atol=1e-15)
    assert val == pytest.approx(1.0)


# -- fidelity -------------------------------------------------------------------


@given(seeds, hst.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_fidelity_properties(seed, n):
    rng = np.random.default_rng(seed)
    rho, sigma = st.random_density(rng, n), st.random_density(rng, n)
    assert mt.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    f = mt.fidelity(rho, sigma)
    assert 0.0 <= f <= 1.0 + 1e-10
    assert f == pytest.approx(mt.fidelity(sigma, rho), abs=1e-10)
    d = mt.trace_distance(rho, sigma)
    # Fuchs-van de Graaf
    assert 1.0 - f <= d + 1e-10
    assert d <= np.sqrt(max(0.0, 1.0 - f**2)) + 1e-10


def test_fidelity_against_textbook_formula(rng):
    from scipy.linalg import sqrtm

    rho, sigma = st.random_density(rng, 4), st.random_density(rng, 4)
    s = sqrtm(rho)
    ref = np.real(np.trace(sqrtm(s @ sigma @ s)))
    assert mt.fidelity(rho, sigma) == pytest.approx(ref, abs=1e-9)


def test_fidelity_pure_versus_mixed():
    n = 5
    assert mt.fidelity(proj(np.eye(n)[0]), st.maximally_mixed(n)) == pytest.approx(n**-0.5, abs=1e-14)


def test_fidelity_disjoint_supports_and_zero():
    assert mt.fidelity(proj([1, 0]), proj([0, 1])) == pytest.approx(0.0, abs=1e-15)
    assert mt.fidelity(np.zeros((2, 2)), proj([0, 1])) == 0.0


def test_fidelity_rejects_non_psd():
    with pytest.raises(NotPSDError):
        mt.fidelity(np.diag([1.5, -0.5]), np.eye(2) / 2)


# -- purity bound ---------------------------------------------------------------


def test_purity_bound_values():
    assert mt.purity_bound(0.0) == 0.0
    assert mt.purity_bound(Q_THRESHOLD) == pytest.approx(1.0, abs=1e-12)
    # q^2 = 2 - sqrt2 makes the inner expression exactly 1/2
    assert mt.purity_bound(np.sqrt(2 - np.sqrt(2))) == pytest.approx(np.sqrt(2), abs=1e-12)
    with pytest.raises(ValueError):
        mt.purity_bound(-0.1)


def literal_bound(q):
    return 2 * np.sqrt(max(0.0, 1 - abs(1 - q**2 + q**4 / 4)))


@given(hst.floats(0.0, 3.0))
def test_purity_bound_matches_literal_form(q):
    # the literal form only carries ~sqrt(eps) absolute accuracy near q = 0
    assert mt.purity_bound(q) == pytest.approx(literal_bound(q), abs=1e-7)
    if q >= 1e-2:
        assert mt.purity_bound(q) == pytest.approx(literal_bound(q), abs=1e-12)


@given(hst.floats(0.0, np.sqrt(2.0)))
def test_purity_bound_matches_fidelity_form(q):
    # bound = 2 sqrt(1 - F^2) with F the closed-form fidelity
    f = mt.closed_form_fidelity(q)
    assert f**2 == pytest.approx(1 - q**2 + q**4 / 4, abs=1e-12)
    if q >= 1e-2:
        assert mt.purity_bound(q) == pytest.approx(2 * np.sqrt(max(0.0, 1 - f**2)), abs=1e-12)


def test_purity_bound_small_q_is_linear():
    for q in (1e-12, 1e-9, 1e-6):
        assert mt.purity_bound(q) == pytest.approx(2 * q, rel=1e-11)


def test_purity_bound_monotone_below_threshold():
    qs = np.linspace(0, Q_THRESHOLD, 200)
    vals = [mt.purity_bound(q) for q in qs]
    assert np.all(np.diff(vals) > 0)


def test_closed_form_fidelity_matches_states(rng):
    # F(|Omega1>, |Omega>) = |<Omega1|Omega>| = 1 - Q^2/2 for real nonneg coefficients
    n = 4
    sf = st.make_schmidt_form(st.targeted_coeffs(n, 0.4), ch.haar_unitary(rng, n), ch.haar_unitary(rng, n))
    omega1, _, q = st.omega_split(sf)
    overlap = abs(np.vdot(omega1.amplitudes, sf.state().amplitudes))
    assert overlap == pytest.approx(1 - q**2 / 2, abs=1e-12)
    assert mt.closed_form_fidelity(q) == pytest.approx(overlap, abs=1e-12)


def test_mixture_bound():
    assert mt.mixture_bound([1.0], [0.3]) == pytest.approx(mt.purity_bound(0.3))
    val = mt.mixture_bound([0.25, 0.75], [0.0, Q_THRESHOLD])
    assert val == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(ValueError):
        mt.mixture_bound([0.5, 0.6], [0.1, 0.2])
    with pytest.raises(ValueError):
        mt.mixture_bound([1.0], [0.1, 0.2])


# -- bound evaluation -----------------------------------------------------------


def test_maximally_entangled_gives_zero_disturbance(rng):
    for n in (2, 3, 5):
        sf = st.make_schmidt_form(np.full(n, n**-0.5), ch.haar_unitary(rng, n), ch.haar_unitary(rng, n),
                                  rng.uniform(0, 2 * np.pi, n))
        for kind in ch.CHANNEL_KINDS:
            ev = mt.evaluate_bound(sf, ch.random_unital_channel(rng, n, kind))
            assert ev.q <= 1e-12
            assert ev.d_alpha <= 1e-9 and ev.d_alphabeta <= 1e-9
            assert ev.beta_trace == pytest.approx(1.0, abs=1e-9)


@given(seeds, hst.integers(2, 5), hst.sampled_from(ch.CHANNEL_KINDS), hst.floats(0.0, 1.0))
@settings(max_examples=60, deadline=None)
def test_bound_chain_holds(seed, n, kind, t):
    rng = np.random.default_rng(seed)
    sf = st.make_schmidt_form(st.targeted_coeffs(n, t), ch.haar_unitary(rng, n), ch.haar_unitary(rng, n),
                              rng.uniform(0, 2 * np.pi, n))
    ev = mt.evaluate_bound(sf, ch.random_unital_channel(rng, n, kind))
    assert ev.margin_ab >= -1e-9
    assert ev.margin_a >= -1e-9
    assert ev.bound == pytest.approx(mt.purity_bound(ev.q))


def test_evaluate_bound_accepts_rank_deficient_state(rng):
    psi = st.random_pure_bipartite(rng, 4, 2)
    ev = mt.evaluate_bound(st.schmidt_decompose(psi), ch.random_unital_channel(rng, 4, "composed"))
    assert ev.margin_ab >= -1e-9 and ev.margin_a >= -1e-9


def test_evaluate_bound_rejects_non_unital(rng):
    sf = st.schmidt_decompose(st.random_pure_bipartite(rng, 2, 2))
    with pytest.raises(ch.ChannelError):
        mt.evaluate_bound(sf, ch.generalized_measurement_example())
    non_tp = ch.KrausChannel((0.5 * np.eye(2),))
    with pytest.raises(ch.ChannelError):
        mt.evaluate_bound(sf, non_tp)


def test_channels_contract_trace_distance(rng):
    for kind in ch.CHANNEL_KINDS:
        chan = ch.random_unital_channel(rng, 3, kind)
        rho, sigma = st.random_density(rng, 3), st.random_density(rng, 3)
        assert mt.trace_distance(ch.apply(chan, rho), ch.apply(chan, sigma)) <= mt.trace_distance(rho, sigma) + 1e-12
