"""Randomized verification campaigns.

Every trial owns a generator derived from the master seed and the trial's
coordinates, so results do not depend on execution order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.linalg import expm

from .. import channels as ch
from .. import metrics as mt
from .. import states as st
from ..tensor import BipartiteDims, dagger, max_abs, partial_trace
from .records import BoundRecord, CampaignConfig, SuiteReport

log = logging.getLogger(__name__)

VIOLATION = 1e-7
Q_THRESHOLD = float(np.sqrt(2.0 - np.sqrt(3.0)))
T_GRID = tuple(i / 10 for i in range(11))

_SUITE_KEYS = {
    "bound-sweep": 1, "invariance": 2, "counterexamples": 3,
    "entropy": 4, "appendix": 5, "envariance": 6, "mixture": 7,
}


def trial_seed(master: int, suite: str, *coords: int) -> int:
    """Counter-based 64-bit seed for one trial."""
    ss = np.random.SeedSequence(master, spawn_key=(_SUITE_KEYS[suite], *coords))
    return int(ss.generate_state(1, np.uint64)[0])


def random_phases(rng, n):
    return rng.uniform(0.0, 2 * np.pi, n)


def targeted_state(rng, n, t, m=None) -> st.SchmidtForm:
    """Schmidt state with coefficients targeted by t, Haar bases and random phases."""
    m = n if m is None else m
    a = ch.haar_unitary(rng, n)
    b = ch.haar_unitary(rng, m)[:, :n]
    return st.make_schmidt_form(st.targeted_coeffs(n, t), a, b, random_phases(rng, n))


# -- bound sweep -----------------------------------------------------------------


def bound_trial(cfg: CampaignConfig, trial: int) -> BoundRecord:
    seed = trial_seed(cfg.seed, "bound-sweep", trial)
    rng = np.random.default_rng(seed)
    kind = ch.CHANNEL_KINDS[trial % 4]
    slot = (trial // 4) % (len(T_GRID) + 1)
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    if slot < len(T_GRID):
        sf = targeted_state(rng, n, T_GRID[slot])
    else:
        m = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        sf = st.schmidt_decompose(st.random_pure_bipartite(rng, n, m))
    chan = ch.random_unital_channel(rng, n, kind)
    ev = mt.evaluate_bound(sf, chan)
    return BoundRecord(
        trial=trial, n=n, q=ev.q, channel_kind=kind, d_alpha=ev.d_alpha,
        d_alphabeta=ev.d_alphabeta, bound=ev.bound, margin_ab=ev.margin_ab,
        margin_a=ev.margin_a, beta_trace=ev.beta_trace, seed=seed,
    )


def _bound_chunk(args):
    cfg, lo, hi = args
    return [bound_trial(cfg, i) for i in range(lo, hi)]


def run_bound_sweep(cfg: CampaignConfig, jobs: int = 1) -> SuiteReport:
    """Check D_alpha <= D_alphabeta <= purity_bound(Q) trial by trial.

    Trials cycle the channel kind (period 4) and the state strategy: the
    eleven targeted values t = 0, 0.1, ..., 1 and one Haar-random state
    with independent M.
    """
    if jobs > 1:
        step = max(1, cfg.trials // (4 * jobs))
        chunks = [(cfg, lo, min(lo + step, cfg.trials)) for lo in range(0, cfg.trials, step)]
        with ProcessPoolExecutor(jobs) as pool:
            records = [r for part in pool.map(_bound_chunk, chunks) for r in part]
    else:
        records = [bound_trial(cfg, i) for i in range(cfg.trials)]

    report = SuiteReport("bound-sweep", records)
    for r in records:
        worst = min(r.margin_ab, r.margin_a)
        if worst < -VIOLATION:
            report.violations += 1
            log.error("trial %d violates the bound chain: %r", r.trial, r)
        elif worst < -cfg.tol:
            report.warnings += 1
            log.warning("trial %d: margin %.3e inside numerical band", r.trial, worst)
        if r.q <= 1e-12 and r.d_alpha > cfg.tol:
            report.violations += 1
            log.error("trial %d: Q = 0 but D_alpha = %.3e", r.trial, r.d_alpha)
        if r.q >= Q_THRESHOLD and r.bound < 1.0 - cfg.tol:
            report.violations += 1
            log.error("trial %d: Q above threshold but bound %.6f < 1", r.trial, r.bound)
        if abs(r.beta_trace - 1.0) > cfg.tol:
            report.warnings += 1
    report.notes["min_margin_ab"] = min((r.margin_ab for r in records), default=float("nan"))
    report.notes["min_margin_a"] = min((r.margin_a for r in records), default=float("nan"))
    return report


# -- invariance ------------------------------------------------------------------


def run_invariance(cfg: CampaignConfig) -> SuiteReport:
    """Unital channels fix I/N; the generalized-measurement example does not."""
    report = SuiteReport("invariance")
    for n in range(cfg.n_min, cfg.n_max + 1):
        mixed = st.maximally_mixed(n)
        for trial in range(cfg.trials):
            rng = np.random.default_rng(trial_seed(cfg.seed, "invariance", n, trial))
            kind = ch.CHANNEL_KINDS[trial % 4]
            chan = ch.random_unital_channel(rng, n, kind)
            d = mt.trace_distance(ch.apply(chan, mixed), mixed)
            report.add_check(f"fixes_maximally_mixed[{kind}]", trial, n, d, 0.0, cfg.tol, "le")

    gm = ch.generalized_measurement_example()
    d = mt.trace_distance(ch.apply(gm, st.maximally_mixed(2)), st.maximally_mixed(2))
    report.add_check("gm_trace_preserving", 0, 2, float(gm.trace_preserving), 1.0, 0.0)
    report.add_check("gm_not_unital", 0, 2, float(gm.unital), 0.0, 0.0)
    report.add_check("gm_moves_maximally_mixed", 0, 2, d, 0.5, 1e-10)
    report.add_check("gm_distance_exceeds_0.4", 0, 2, 0.4, d, 0.0, "le")
    return report


# -- counterexamples -------------------------------------------------------------


def counterexample_one(n: int, basis):
    """Pure |alpha_0><alpha_0| under the cyclic basis swap |alpha_k> -> |alpha_(k+1)>.

    Returns (trace distance, Q).
    """
    sigma = np.outer(basis[:, 0], np.conj(basis[:, 0]))
    swapped = np.roll(basis, -1, axis=1)
    u = swapped @ dagger(basis)
    d = mt.trace_distance(u @ sigma @ dagger(u), sigma)
    q = st.q_purity(st.schmidt_decompose(st.purify(sigma)), n).q
    return d, q


def counterexample_two(n: int, basis):
    """Premeasure |alpha_0> in a basis where it is the uniform superposition.

    Returns (fidelity squared, trace distance).
    """
    k = np.arange(n)
    fourier = np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
    a_basis = basis @ fourier
    sigma = np.outer(basis[:, 0], np.conj(basis[:, 0]))
    out = ch.apply(ch.premeasurement_channel(a_basis), sigma)
    return mt.fidelity(sigma, out) ** 2, mt.trace_distance(sigma, out)


def run_counterexamples(cfg: CampaignConfig) -> SuiteReport:
    report = SuiteReport("counterexamples")
    ns = range(cfg.n_min, cfg.n_max + 1)
    for trial in range(cfg.trials):
        d_seq = []
        for n in ns:
            rng = np.random.default_rng(trial_seed(cfg.seed, "counterexamples", n, trial))
            basis = ch.haar_unitary(rng, n)
            d1, q = counterexample_one(n, basis)
            report.add_check("ce1_distance", trial, n, d1, 1.0, 1e-10)
            report.add_check("ce1_q", trial, n, q, st.q_max(n), 1e-10)
            report.add_check("ce1_q_above_threshold", trial, n, Q_THRESHOLD, q, 0.0, "le")
            f2, d2 = counterexample_two(n, basis)
            report.add_check("ce2_fidelity_sq", trial, n, f2, 1.0 / n, 1e-9)
            report.add_check("ce2_distance_lower", trial, n, 1.0 - 1.0 / n, d2, 1e-9, "le")
            d_seq.append(d2)
        steps = np.diff(d_seq)
        worst = float(-steps.min()) if steps.size else 0.0
        report.add_check("ce2_distance_nondecreasing", trial, ns[-1], worst, 0.0, 1e-9, "le")
    return report


# -- entropy ---------------------------------------------------------------------


def run_entropy(cfg: CampaignConfig) -> SuiteReport:
    """S(rho) <= H_O(rho), its equality case, and the Bell reduced state."""
    report = SuiteReport("entropy")
    bell_red = partial_trace(st.bell_state().density(), BipartiteDims(2, 2), keep="alpha")
    for trial in range(cfg.trials):
        rng = np.random.default_rng(trial_seed(cfg.seed, "entropy", trial))
        n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        r = int(rng.integers(1, n + 1))
        rho = st.random_pure_bipartite(rng, n, r).reduced("alpha")
        basis = ch.haar_unitary(rng, n)
        s = st.von_neumann_entropy(rho)
        report.add_check("entropy_inequality", trial, n, s, st.shannon_entropy_observable(rho, basis),
                         cfg.tol, "le")
        _, eig = np.linalg.eigh(rho)
        report.add_check("entropy_equality_eigenbasis", trial, n,
                         st.shannon_entropy_observable(rho, eig), s, 1e-9)
        b2 = ch.haar_unitary(rng, 2)
        report.add_check("bell_shannon_ln2", trial, 2,
                         st.shannon_entropy_observable(bell_red, b2), np.log(2.0), 1e-10)
    return report


# -- appendix identities -----------------------------------------------------------


def _appendix_state(rng, trial, cfg):
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    if trial % 2:
        m = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        return n, st.schmidt_decompose(st.random_pure_bipartite(rng, n, m))
    return n, targeted_state(rng, n, float(rng.uniform()))


def _random_test_channel(rng, n, frame: st.SchmidtForm, trial):
    """Mix of unital and non-unital maps, including bare projector elements."""
    pick = trial % 6
    if pick < 4:
        return ch.random_unital_channel(rng, n, ch.CHANNEL_KINDS[pick])
    if pick == 4:
        k = int(rng.integers(2, 4))
        return ch.random_tp_channel(rng, n, k)
    # projector elements: onto one Schmidt vector, or onto a random subspace
    if rng.uniform() < 0.5:
        a = frame.alpha_basis[:, 0]
        return ch.KrausChannel((np.outer(a, np.conj(a)),))
    r = int(rng.integers(1, n))
    v = ch.haar_unitary(rng, n)[:, :r]
    p = v @ dagger(v)
    return ch.KrausChannel((p, np.eye(n) - p))


def split_identity_checks(report, trial, n, sf, chan, tol):
    pad = st.pad_schmidt(sf)
    pm = st.q_purity(pad, pad.n)
    q, d = pm.q, pm.d
    rn = np.sqrt(pad.n)
    report.add_check("coefficient_identity", trial, n, np.sum(d**2), -2.0 / rn * np.sum(d), 1e-9)
    report.add_check("q_upper_range", trial, n, q, st.q_max(pad.n), 1e-10, "le")

    omega = pad.state()
    o1, o2, q = st.omega_split(sf)
    rho = omega.density()
    rho11 = o1.density()
    if o2 is None:
        report.add_check("degenerate_fidelity", trial, n, mt.fidelity(rho11, rho), 1.0, 1e-9)
        report.add_check("degenerate_distance", trial, n, mt.trace_distance(rho11, rho), 0.0, 1e-9)
    else:
        reassembled = o1.amplitudes + q * o2.amplitudes
        report.add_check("reassembly", trial, n, np.linalg.norm(reassembled - omega.amplitudes), 0.0, 1e-9)
        overlap = np.vdot(o1.amplitudes, o2.amplitudes)
        report.add_check("overlap_real", trial, n, overlap.real, -q / 2, 1e-9)
        report.add_check("overlap_imag", trial, n, overlap.imag, 0.0, 1e-9)
        rho12 = np.outer(o1.amplitudes, np.conj(o2.amplitudes))
        rho21 = dagger(rho12)
        rho22 = o2.density()
        report.add_check("rho12_rho21", trial, n, max_abs(rho12 @ rho21 - rho11), 0.0, 1e-9)
        report.add_check("rho21_rho12", trial, n, max_abs(rho21 @ rho12 - rho22), 0.0, 1e-9)
        report.add_check("rho12_rho12", trial, n, max_abs(rho12 @ rho12 + q / 2 * rho12), 0.0, 1e-9)
        report.add_check("rho21_rho21", trial, n, max_abs(rho21 @ rho21 + q / 2 * rho21), 0.0, 1e-9)
        expand = rho11 + q * (rho12 + rho21) + q**2 * rho22
        report.add_check("rho_expansion", trial, n, max_abs(expand - rho), 0.0, 1e-9)
    f = mt.fidelity(rho11, rho)
    report.add_check("fidelity_closed_form", trial, n, f, mt.closed_form_fidelity(q), 1e-9)
    d11 = mt.trace_distance(rho11, rho)
    report.add_check("pure_distance_fidelity", trial, n, d11, np.sqrt(max(0.0, 1.0 - f**2)), 1e-9)

    if chan.unital and chan.trace_preserving:
        frame = pad.with_coeffs(np.full(pad.n, 1.0 / rn))
        ch_b = ch.counterpart_channel(chan, frame)
        dims = omega.dims
        out_a = ch.apply_on_alpha(chan, rho, dims)
        out_b = ch.apply_on_beta(ch_b, rho, dims)
        d_ab = mt.trace_distance(out_a, out_b)
        report.add_check("triangle_chain", trial, n, d_ab, 2 * d11, tol, "le")
        report.add_check("uniform_part_indistinguishable", trial, n,
                         mt.trace_distance(ch.apply_on_alpha(chan, rho11, dims),
                                           ch.apply_on_beta(ch_b, rho11, dims)), 0.0, 1e-9)
        report.add_check("contractivity", trial, n, mt.trace_distance(
            ch.apply_on_alpha(chan, rho, dims), ch.apply_on_alpha(chan, rho11, dims)), d11, tol, "le")


def counterpart_checks(report, trial, n, frame, chan, literal):
    elems_b = ch.counterpart_elements(chan.elements, frame)
    psi = frame.state()
    report.add_check("counterpart_identity", trial, n,
                     ch.counterpart_residual(chan.elements, elems_b, psi), 0.0, 1e-9, "le")
    comp = sum(dagger(e) @ e for e in elems_b)
    tp_beta = max_abs(comp - np.eye(comp.shape[0])) <= 1e-9
    report.add_check("unital_iff_beta_trace_preserving", trial, n,
                     float(tp_beta), float(chan.unital), 0.0)
    plus = ch.counterpart_elements(chan.elements, frame, phase_sign=+1)
    literal.append(ch.counterpart_residual(chan.elements, plus, psi))


def run_appendix(cfg: CampaignConfig) -> SuiteReport:
    report = SuiteReport("appendix")
    literal = []
    nonzero_phase = 0
    for trial in range(cfg.trials):
        rng = np.random.default_rng(trial_seed(cfg.seed, "appendix", trial))
        n, sf = _appendix_state(rng, trial, cfg)
        frame = st.make_schmidt_form(np.full(n, 1 / np.sqrt(n)), ch.haar_unitary(rng, n),
                                     ch.haar_unitary(rng, n), random_phases(rng, n))
        nonzero_phase += int(np.any(frame.phases > 1e-6))
        chan = _random_test_channel(rng, n, frame, trial)
        split_identity_checks(report, trial, n, sf, ch.random_unital_channel(rng, n, ch.CHANNEL_KINDS[trial % 4]),
                          cfg.tol)
        counterpart_checks(report, trial, n, frame, chan, literal)
    lit = np.asarray(literal)
    report.notes["frames_with_nonzero_phases"] = nonzero_phase
    report.notes["literal_phase_sign_max_residual"] = float(lit.max())
    report.notes["literal_phase_sign_holds"] = int(np.count_nonzero(lit <= 1e-9))
    return report


# -- envariance ------------------------------------------------------------------

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def spin_rotation(theta) -> np.ndarray:
    """exp(i theta . sigma)"""
    return expm(1j * sum(t * s for t, s in zip(theta, PAULI)))


def bell_partner(theta) -> np.ndarray:
    """Rotation on particle 2 reproducing exp(i theta . sigma) on particle 1 for the Bell state."""
    return spin_rotation((theta[0], theta[1], -theta[2]))


def run_envariance(cfg: CampaignConfig) -> SuiteReport:
    report = SuiteReport("envariance")
    bell = st.bell_state()
    literal_ok = 0
    for trial in range(cfg.trials):
        rng = np.random.default_rng(trial_seed(cfg.seed, "envariance", trial))
        n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        m = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        psi = st.random_pure_bipartite(rng, n, m)
        sf = st.schmidt_decompose(psi)
        pair = ch.envariant_phase_pair(sf, rng.uniform(0, 2 * np.pi, sf.rank), psi.dims)
        report.add_check("phase_pair", trial, n,
                         float(ch.check_envariance(pair.u_alpha, pair.u_beta, psi, 1e-10)), 1.0, 0.0)

        me = st.maximally_entangled(n, random_phases(rng, n))
        frame = st.make_schmidt_form(np.full(n, 1 / np.sqrt(n)), np.eye(n), np.eye(n), np.angle(np.diag(me.matrix())))
        u = ch.haar_unitary(rng, n)
        partner = ch.counterpart_channel(ch.unitary_channel(u), frame).elements[0]
        report.add_check("maximally_entangled_any_unitary", trial, n,
                         float(ch.check_envariance(u, dagger(partner), me, 1e-10)), 1.0, 0.0)

        theta = rng.normal(size=3)
        rot = spin_rotation(theta)
        report.add_check("bell_rotation_pair", trial, 2,
                         float(ch.check_envariance(rot, dagger(bell_partner(theta)), bell, 1e-10)), 1.0, 0.0)
        same = np.linalg.norm((rot @ bell.matrix() - bell.matrix() @ rot.T).reshape(-1))
        literal_ok += int(same <= 1e-10)
    report.notes["bell_same_theta_holds"] = literal_ok
    return report


def run_mixtures(cfg: CampaignConfig) -> SuiteReport:
    """Convexity extension on two- and three-component mixtures."""
    report = SuiteReport("mixture")
    for trial in range(cfg.trials):
        seed = trial_seed(cfg.seed, "mixture", trial)
        n = cfg.n_min + trial % (cfg.n_max - cfg.n_min + 1)
        d, bound = mixture_trial(seed, n, 2 + trial % 2)
        report.add_check("mixture_bound", trial, n, d, bound, VIOLATION, "le")
    return report


RUNNERS = {
    "bound-sweep": run_bound_sweep,
    "invariance": run_invariance,
    "counterexamples": run_counterexamples,
    "entropy": run_entropy,
    "appendix": run_appendix,
    "envariance": run_envariance,
    "mixture": run_mixtures,
}


def run_suite(cfg: CampaignConfig, jobs: int = 1) -> SuiteReport:
    if cfg.suite == "bound-sweep":
        return run_bound_sweep(cfg, jobs)
    return RUNNERS[cfg.suite](cfg)


# -- mixtures ---------------------------------------------------------------------


def mixture_trial(seed: int, n: int, components: int):
    """D(E_alpha(rho_bar), E_beta(rho_bar)) and the weighted bound for one mixture.

    All components share one Schmidt frame, so a single beta-side channel
    serves every component.
    """
    rng = np.random.default_rng(seed)
    a = ch.haar_unitary(rng, n)
    b = ch.haar_unitary(rng, n)
    phases = random_phases(rng, n)
    weights = rng.dirichlet(np.ones(components))
    forms = [st.make_schmidt_form(st.targeted_coeffs(n, t), a, b, phases)
             for t in rng.uniform(0, 0.6, components)]
    frame = forms[0].with_coeffs(np.full(n, 1 / np.sqrt(n)))
    chan = ch.random_unital_channel(rng, n, ch.CHANNEL_KINDS[int(rng.integers(4))])
    ch_b = ch.counterpart_channel(chan, frame)
    dims = forms[0].dims
    rho_bar = sum(w * f.state().density() for w, f in zip(weights, forms))
    d = mt.trace_distance(ch.apply_on_alpha(chan, rho_bar, dims), ch.apply_on_beta(ch_b, rho_bar, dims))
    qs = [st.q_purity(f).q for f in forms]
    return d, mt.mixture_bound(weights, qs)
