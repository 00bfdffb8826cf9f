"""Finite-bath oracle: explicit bath modes, exact Gaussian propagation.

Each bath is replaced by N oscillators whose couplings reproduce the spectral
density, rho(w) = (pi/2) sum_j k_j c_j^2 delta(w - w_j). The full quadratic
Hamiltonian (system, coupling spring, baths including the k_j c_j^2 x^2
counter-terms) is diagonalised once; covariances then follow from the exact
linear flow, with no time stepping.

Frequency grid: a uniform midpoint grid on [0, omega_fine] (holding most
modes, it controls the recurrence time 2 pi / d omega) followed by a tail on
[omega_fine, Omega_max] that is uniform in arctan(omega tau_c), i.e. equal
coupling weight per mode for the Drude shape.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .bath import effective_temperature
from .covariance import CovarianceMatrix
from .errors import ConfigError, ConvergenceError
from .response import lossless_eigenfrequencies


@dataclass(frozen=True)
class BathGrid:
    omega: np.ndarray     # mode frequencies
    weight: np.ndarray    # k_j c_j^2 = (2/pi) rho(w_j) dw_j
    d_omega_fine: float
    omega_fine: float
    omega_max: float

    @property
    def t_rec(self):
        return 2.0 * np.pi / self.d_omega_fine


def discretize_bath(bath, n_modes, omega_max, omega_fine=None, fine_fraction=2.0 / 3.0):
    """Mode frequencies and coupling weights for one bath."""
    if omega_fine is None or omega_fine >= omega_max:
        omega_fine = omega_max
        n_fine = n_modes
    else:
        n_fine = int(round(fine_fraction * n_modes))
    dw = omega_fine / n_fine
    wf = (np.arange(n_fine) + 0.5) * dw
    weights = [2.0 / np.pi * bath.rho(wf) * dw]
    freqs = [wf]
    n_tail = n_modes - n_fine
    if n_tail > 0:
        tc = bath.tau_c
        th0, th1 = np.arctan(omega_fine * tc), np.arctan(omega_max * tc)
        dth = (th1 - th0) / n_tail
        th = th0 + (np.arange(n_tail) + 0.5) * dth
        wt = np.tan(th) / tc
        dw_dth = (1.0 + (wt * tc) ** 2) / tc
        freqs.append(wt)
        weights.append(2.0 / np.pi * bath.rho(wt) * dw_dth * dth)
    return BathGrid(np.concatenate(freqs), np.concatenate(weights), dw, omega_fine, omega_max)


@dataclass(frozen=True)
class FiniteBathModel:
    pair: object
    baths: tuple
    grids: tuple
    masses: np.ndarray = field(repr=False)      # (m1, m2, bath masses)
    couplings: np.ndarray = field(repr=False)   # c_j for all bath modes
    frequencies: np.ndarray = field(repr=False)  # normal-mode frequencies of the closed system
    U: np.ndarray = field(repr=False)           # mass-weighted normal-mode eigenvectors

    @property
    def n_dof(self):
        return len(self.masses)

    @property
    def t_rec(self):
        return min(g.t_rec for g in self.grids)

    @property
    def dimension(self):
        return 2 * self.n_dof


def build_model(pair, baths, N1=1500, N2=1500, Omega_max=None, omega_fine=None,
                fine_fraction=2.0 / 3.0):
    """Discretise both baths and diagonalise the closed quadratic Hamiltonian."""
    if min(N1, N2) < 100:
        raise ConfigError("each bath needs at least 100 modes")
    if not (pair.k1 > 0 and pair.k2 > 0 and pair.lam**2 < pair.k1p * pair.k2p):
        raise ConfigError("closed Hamiltonian is not positive definite (stability violated)")
    wp, _ = lossless_eigenfrequencies(pair)
    if Omega_max is None:
        Omega_max = 20.0 / min(b.tau_c for b in baths)
    if Omega_max < 20.0 / max(b.tau_c for b in baths) * (1 - 1e-12):
        raise ConfigError("Omega_max must cover the Drude tail (>= 20 / tau_c)")
    if omega_fine is None:
        omega_fine = min(4.0 * wp, Omega_max)
    grids = tuple(discretize_bath(b, n, Omega_max, omega_fine, fine_fraction)
                  for b, n in zip(baths, (N1, N2)))
    for b, g in zip(baths, grids):
        if b.gamma > 0 and g.d_omega_fine > b.gamma / 10:
            raise ConfigError(
                f"bath grid too coarse: d omega = {g.d_omega_fine:.3g} > gamma/10 = {b.gamma / 10:.3g}"
            )

    wj = np.concatenate([g.omega for g in grids])
    wts = np.concatenate([g.weight for g in grids])
    # bath masses with m_j w_j = 1 keep mode variances of order one
    mj = 1.0 / wj
    kj = mj * wj**2
    cj = np.sqrt(wts / kj)
    n1 = len(grids[0].omega)
    n = 2 + len(wj)
    V = np.zeros((n, n))
    V[0, 0] = pair.k1 + pair.lam + wts[:n1].sum()
    V[1, 1] = pair.k2 + pair.lam + wts[n1:].sum()
    V[0, 1] = V[1, 0] = -pair.lam
    idx = np.arange(2, n)
    V[idx, idx] = kj
    V[0, idx[:n1]] = V[idx[:n1], 0] = -(kj * cj)[:n1]
    V[1, idx[n1:]] = V[idx[n1:], 1] = -(kj * cj)[n1:]
    masses = np.concatenate([[pair.m1, pair.m2], mj])
    s = 1.0 / np.sqrt(masses)
    Wm = s[:, None] * V * s[None, :]
    om2, U = linalg.eigh(Wm)
    if om2[0] <= 0:
        raise ConfigError("closed Hamiltonian is not positive definite (stability violated)")
    return FiniteBathModel(pair, tuple(baths), grids, masses, cj, np.sqrt(om2), U)


def _initial_factors(model, baths=None):
    """Diagonal Sigma(0): (position variances, momentum variances)."""
    baths = model.baths if baths is None else baths
    pair = model.pair
    n1 = len(model.grids[0].omega)
    wj = np.concatenate([g.omega for g in model.grids])
    mj = model.masses[2:]
    kj = mj * wj**2
    theta = np.concatenate([
        effective_temperature(baths[0].temperature, wj[:n1]),
        effective_temperature(baths[1].temperature, wj[n1:]),
    ])
    var_x = 1.0 / (2.0 * pair.m1 * pair.omega10)
    var_y = 1.0 / (2.0 * pair.m2 * pair.omega20)
    dq = np.concatenate([[var_x, var_y], theta / kj])
    dp = np.concatenate([[pair.m1 * pair.omega10 / 2, pair.m2 * pair.omega20 / 2], mj * theta])
    return dq, dp


def initial_covariance(model, baths=None):
    """Sigma(0) as (Sqq, Spp): a product state, system oscillators in the
    ground state of their bare Hamiltonians and each bath mode thermal about
    the origin, so with <x(0)> = 0 the clamped shift q_j - c_j x(0) has zero
    mean. Its fluctuating part is an initial slip that decays with the
    transients."""
    dq, dp = _initial_factors(model, baths)
    return np.diag(dq), np.diag(dp)


class _Propagator:
    """System rows of the flow in normal-mode coordinates."""

    def __init__(self, model, baths=None):
        self.model = model
        m = model.masses
        U = model.U
        self.Om = model.frequencies
        # q = M^-1/2 U xi, p = M^1/2 U pi
        self.Aq = U / np.sqrt(m)[:, None]
        self.Ap = U * np.sqrt(m)[:, None]
        dq, dp = _initial_factors(model, baths)
        # xi0 = U^T M^1/2 q0, pi0 = U^T M^-1/2 p0
        Bq = U.T * np.sqrt(m)[None, :]
        Bp = U.T / np.sqrt(m)[None, :]
        self.Sxx = (Bq * dq) @ Bq.T
        self.Spp = (Bp * dp) @ Bp.T

    def rows(self, t, q_rows, p_rows):
        """Coefficients of chosen position / momentum combinations at time t
        in terms of (xi0, pi0). q_rows, p_rows: arrays (k, n) in original
        coordinates, or lists of coordinate indices."""
        c, s = np.cos(self.Om * t), np.sin(self.Om * t)
        rq = self.Aq[q_rows] if isinstance(q_rows, list) else q_rows @ self.Aq
        rp = self.Ap[p_rows] if isinstance(p_rows, list) else p_rows @ self.Ap
        top = np.hstack([rq * c, rq * s / self.Om])
        bot = np.hstack([-rp * self.Om * s, rp * c])
        return top, bot

    def covariance(self, R):
        n = len(self.Om)
        return R[:, :n] @ self.Sxx @ R[:, :n].T + R[:, n:] @ self.Spp @ R[:, n:].T

    def cross_cov(self, R1, R2):
        n = len(self.Om)
        return R1[:, :n] @ self.Sxx @ R2[:, :n].T + R1[:, n:] @ self.Spp @ R2[:, n:].T


def system_rows(prop, t):
    """4 x 2n rows for (x, p_x, y, p_y) at time t."""
    top, bot = prop.rows(t, [0, 1], [0, 1])
    return np.vstack([top[0], bot[0], top[1], bot[1]])


def propagate_covariance(model, t, baths=None, guard=True):
    """Full covariance Sigma(t) over (q..., p...) (dimension 2 n_dof)."""
    if guard and t > 0.5 * model.t_rec:
        raise ConfigError(f"t = {t:g} beyond recurrence guard 0.5 t_rec = {0.5 * model.t_rec:g}")
    Sqq, Spp = initial_covariance(model, baths)
    n = model.n_dof
    S0 = np.zeros((2 * n, 2 * n))
    S0[:n, :n] = Sqq
    S0[n:, n:] = Spp
    if t == 0:
        return S0
    Phi = flow_matrix(model, t)
    return Phi @ S0 @ Phi.T


def flow_matrix(model, t):
    """Exact linear flow Phi(t) over (q..., p...)."""
    m = model.masses
    U = model.U
    Om = model.frequencies
    c, s = np.cos(Om * t), np.sin(Om * t)
    Aq = U / np.sqrt(m)[:, None]
    Ap = U * np.sqrt(m)[:, None]
    Bq = U.T * np.sqrt(m)[None, :]
    Bp = U.T / np.sqrt(m)[None, :]
    n = len(m)
    Phi = np.empty((2 * n, 2 * n))
    Phi[:n, :n] = (Aq * c) @ Bq
    Phi[:n, n:] = (Aq * (s / Om)) @ Bp
    Phi[n:, :n] = (Ap * (-Om * s)) @ Bq
    Phi[n:, n:] = (Ap * c) @ Bp
    return Phi


def symplectic_form(n):
    Z = np.zeros((2 * n, 2 * n))
    Z[:n, n:] = np.eye(n)
    Z[n:, :n] = -np.eye(n)
    return Z


def symplectic_defect(model, t):
    """max |Phi sigma Phi^T - sigma| for the full flow at time t."""
    Phi = flow_matrix(model, t)
    sig = symplectic_form(model.n_dof)
    return float(np.abs(Phi @ sig @ Phi.T - sig).max())


def system_commutator_defect(model, t):
    """max deviation of the system-block commutators [q_a(t), q_b(t)] from i sigma."""
    prop = _Propagator(model)
    R = system_rows(prop, t)
    n = model.n_dof
    sig = symplectic_form(n)
    comm = R @ sig @ R.T
    target = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)
    return float(np.abs(comm - target).max())


def system_covariance_at(model, t, baths=None):
    prop = _Propagator(model, baths)
    return prop.covariance(system_rows(prop, t))


@dataclass(frozen=True)
class OracleSteadyState:
    covariance: CovarianceMatrix
    heat_current: float
    window: tuple
    spread: float                # max std of entries over the window / |C|
    power_terms: dict = None     # power into oscillator 1 by source, plus mean dE1/dt


def default_relaxation_time(model):
    pair, (b1, b2) = model.pair, model.baths
    rates = [b1.gamma / pair.m1, b2.gamma / pair.m2]
    return 10.0 / min(r for r in rates if r > 0)


def steady_system_covariance(model, t_relax=None, window=None, n_samples=200, baths=None,
                             power_terms=False):
    """Time-average the system block over [t_relax, t_relax + window]."""
    pair = model.pair
    if t_relax is None:
        t_relax = default_relaxation_time(model)
    if window is None:
        _, wm = lossless_eigenfrequencies(pair)
        window = 10 * 2 * np.pi / wm
    t_end = t_relax + window
    if t_end > 0.5 * model.t_rec:
        raise ConfigError(
            f"averaging window ends at t = {t_end:g}, beyond 0.5 t_rec = {0.5 * model.t_rec:g}; "
            "use more bath modes"
        )
    prop = _Propagator(model, baths)
    times = np.linspace(t_relax, t_end, n_samples)
    samples = np.empty((n_samples, 4, 4))
    n = model.n_dof
    n1 = len(model.grids[0].omega)
    if power_terms:
        wj = np.concatenate([g.omega for g in model.grids])[:n1]
        kj = model.masses[2:2 + n1] * wj**2
        cj = model.couplings[:n1]
        # total bath force on x: sum_j k_j c_j (q_j - c_j x)
        fB = np.zeros((1, n))
        fB[0, 2:2 + n1] = kj * cj
        fB[0, 0] = -np.sum(kj * cj**2)
        spring = np.empty(n_samples)
        bath_power = np.empty(n_samples)
        langevin = np.empty(n_samples)
        energy = np.empty(n_samples)
    for i, t in enumerate(times):
        R = system_rows(prop, t)
        samples[i] = prop.covariance(R)
        if power_terms:
            top, _ = prop.rows(t, fB, np.zeros((1, n)))
            bath_power[i] = prop.cross_cov(R[1:2], top)[0, 0] / pair.m1
            # free Langevin force from the initial bath state (clamped coordinates)
            cw, sw = np.cos(wj * t), np.sin(wj * t)
            fq = np.zeros(n)
            fq[2:2 + n1] = cj * kj * cw
            fq[0] = -np.sum(cj**2 * kj * cw)
            fp = np.zeros(n)
            fp[2:2 + n1] = cj * wj * sw
            # express initial-coordinate functional in (xi0, pi0)
            F = np.concatenate([fq @ prop.Aq, fp @ prop.Ap])[None, :]
            langevin[i] = prop.cross_cov(R[1:2], F)[0, 0] / pair.m1
            spring[i] = pair.lam * (samples[i][1, 2] - samples[i][1, 0]) / pair.m1
            energy[i] = 0.5 * (samples[i][1, 1] / pair.m1 + pair.k1p * samples[i][0, 0])
    C = samples.mean(axis=0)
    C = 0.5 * (C + C.T)
    spread = float(samples.std(axis=0).max() / np.linalg.norm(C))
    if spread > 0.01:
        raise ConvergenceError(
            f"no plateau: entries fluctuate by {spread:.2%} over the window; "
            "increase t_relax or the number of bath modes"
        )
    q = 0.5 * pair.lam * (C[0, 3] / pair.m2 - C[1, 2] / pair.m1)
    terms = None
    if power_terms:
        terms = {
            "spring": float(spring.mean()),
            "dissipation": float((bath_power - langevin).mean()),
            "langevin_work": float(langevin.mean()),
            # independent: mean dE1/dt from the energy at the window ends
            "energy_rate": float((energy[-1] - energy[0]) / (t_end - t_relax)),
        }
    return OracleSteadyState(CovarianceMatrix(C), float(q), (t_relax, t_end), spread, terms)
