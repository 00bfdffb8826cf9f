"""Gaussian two-mode information quantities from a 4x4 covariance matrix.

Basis (x, p_x, y, p_y), hbar = 1, symmetrised covariances, so the vacuum of
unit-frequency oscillators has C = I/2.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import PhysicalityError

HBAR = 1.0

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
SIGMA = linalg.block_diag(J2, J2)
GAMMA = np.diag([1.0, 1.0, 1.0, -1.0])

# accept symplectic eigenvalues down to hbar/2 * (1 - PHYS_TOL)
PHYS_TOL = 1e-6


def _mat(C):
    C = getattr(C, "C", C)
    C = np.asarray(C, dtype=float)
    if C.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got shape {C.shape}")
    return C


def blocks(C):
    """(A, B, Cross) 2x2 blocks."""
    C = _mat(C)
    return C[:2, :2], C[2:, 2:], C[:2, 2:]


@dataclass(frozen=True)
class SymplecticResult:
    eigenvalues: np.ndarray  # ascending, one per mode
    transform: np.ndarray    # rows (Q1, P1, Q2, P2)

    @property
    def diagonal(self):
        return np.repeat(self.eigenvalues, 2)


@dataclass(frozen=True)
class EprPair:
    Qcoeffs: np.ndarray
    Pcoeffs: np.ndarray
    uncertainty: float


def _fix_phase(v):
    # choose v -> e^{i phi} v so that Q = Re v has maximal weight on x and y
    pos = v[[0, 2]]
    s = np.sum(pos**2)
    phi = -0.5 * np.angle(s) if abs(s) > 1e-14 * np.sum(np.abs(pos) ** 2) else 0.0
    v = v * np.exp(1j * phi)
    Q = v.real
    for q in (Q[0], Q[2], Q[1], Q[3]):
        if abs(q) > 1e-12 * np.max(np.abs(Q)):
            if q < 0:
                v = -v
            break
    return v


def williamson(C):
    """Symplectic diagonalisation S C S^T = diag(eta1, eta1, eta2, eta2).

    Eigenvectors v = Q + iP of -i sigma C with eta > 0 are normalised to
    Q^T sigma P = 1 and stacked as rows of S. The problem is reduced to a
    Hermitian one through the Cholesky factor C = L L^T, so degenerate
    eigenvalues (e.g. the vacuum) are handled without special cases.
    """
    C = _mat(C)
    C = 0.5 * (C + C.T)
    try:
        L = linalg.cholesky(C, lower=True)
    except linalg.LinAlgError as exc:
        raise PhysicalityError("covariance matrix is not positive definite") from exc
    Linv = linalg.solve_triangular(L, np.eye(4), lower=True)
    H = Linv @ (-1j * SIGMA) @ Linv.T
    H = 0.5 * (H + H.conj().T)
    lam, W = linalg.eigh(H)
    # eigenvalues of H are +-1/eta; the positive ones give eta > 0
    pos = lam > 0
    if pos.sum() != 2:
        raise PhysicalityError("symplectic spectrum does not split into +- pairs")
    etas = 1.0 / lam[pos]
    V = Linv.T @ W[:, pos]
    order = np.argsort(etas)
    etas = etas[order]
    V = V[:, order]
    rows = []
    for k in range(2):
        v = V[:, k] * np.sqrt(2.0 * etas[k])
        v = _fix_phase(v)
        Q, P = v.real, v.imag
        norm = Q @ SIGMA @ P
        if not norm > 0:
            raise PhysicalityError("symplectic normalisation failed")
        scale = 1.0 / np.sqrt(norm)
        rows += [Q * scale, P * scale]
    return SymplecticResult(etas, np.array(rows))


def symplectic_eigenvalues(C):
    """Symplectic spectrum via the moduli of eigenvalues of sigma C (cheap path)."""
    ev = np.abs(linalg.eigvals(SIGMA @ _mat(C)))
    return np.sort(ev)[::2]


def partial_transpose(C):
    return GAMMA @ _mat(C) @ GAMMA


def ppt_min_symplectic_eigenvalue(C):
    return float(williamson(partial_transpose(C)).eigenvalues[0])


def logarithmic_negativity(C):
    eta = ppt_min_symplectic_eigenvalue(C)
    if eta < HBAR / 2:
        return float(np.log(HBAR / (2.0 * eta)))
    return 0.0


def invariant_I4(A, B, X):
    """Fourth local symplectic invariant tr(s A s X s B s X^T), 2x2 blocks.

    Works for complex (spectral) blocks too; X^T is a plain transpose.
    """
    return np.trace(J2 @ A @ J2 @ X @ J2 @ B @ J2 @ X.T)


def duan_simon_margin(C):
    """Left minus right side of the Duan-Simon separability inequality."""
    A, B, X = blocks(C)
    dA, dB, dX = np.linalg.det(A), np.linalg.det(B), np.linalg.det(X)
    h2 = HBAR**2 / 4.0
    return float(dA * dB + (abs(dX) - h2) ** 2 - invariant_I4(A, B, X) - h2 * (dA + dB))


def duan_simon_separable(C):
    """(separable, margin): separable iff margin >= 0."""
    m = duan_simon_margin(C)
    return m >= 0, m


def epr_pair(C):
    """Optimal EPR coordinates from the smallest symplectic mode of Gamma C Gamma."""
    res = williamson(partial_transpose(C))
    Qp, Pp = res.transform[0], res.transform[1]
    return EprPair(GAMMA @ Qp, GAMMA @ Pp, float(res.eigenvalues[0]))


def ppt_hermitian_min_eigenvalue(C):
    """Smallest eigenvalue of C^Gamma + (i hbar/2) sigma; negative means entangled."""
    M = partial_transpose(C) + 0.5j * HBAR * SIGMA
    return float(linalg.eigvalsh(M)[0])


def physical_min_eigenvalue(C):
    """Smallest eigenvalue of C + (i hbar/2) sigma (uncertainty relation)."""
    return float(linalg.eigvalsh(_mat(C) + 0.5j * HBAR * SIGMA)[0])


def entropy_function(x):
    """Von Neumann entropy of a mode with 2 nu / hbar = x >= 1."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    d = x - 1.0
    small = d < 1e-8
    ds = np.maximum(d[small], 0.0)
    # f(1 + d) = -(d/2) log(d/2) + (d/2) + O(d^2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = np.where(ds > 0, -(ds / 2) * np.log(ds / 2) + ds / 2, 0.0)
    xl = x[~small]
    out[~small] = (xl + 1) / 2 * np.log((xl + 1) / 2) - (xl - 1) / 2 * np.log((xl - 1) / 2)
    return out if out.ndim else float(out)


def _check_nu(nu, what):
    if np.any(nu < HBAR / 2 * (1 - PHYS_TOL)):
        raise PhysicalityError(f"{what} symplectic eigenvalue {np.min(nu):.12g} below hbar/2")


def entropies(C):
    """(S_total, S_1, S_2, S_mutual) in nats."""
    C = _mat(C)
    nu = williamson(C).eigenvalues
    _check_nu(nu, "global")
    A, B, _ = blocks(C)
    nuA, nuB = np.sqrt(np.linalg.det(A)), np.sqrt(np.linalg.det(B))
    _check_nu(np.array([nuA, nuB]), "local")
    f = entropy_function
    S_tot = float(np.sum(f(np.maximum(2 * nu / HBAR, 1.0))))
    S1 = float(f(max(2 * nuA / HBAR, 1.0)))
    S2 = float(f(max(2 * nuB / HBAR, 1.0)))
    return S_tot, S1, S2, S1 + S2 - S_tot


def mutual_information(C):
    return entropies(C)[3]


def two_mode_squeezed(r, nbar=0.0):
    """Covariance of a two-mode squeezed thermal state (x-x correlated, p-p anti)."""
    c = (2 * nbar + 1) * np.cosh(2 * r) * HBAR / 2
    s = (2 * nbar + 1) * np.sinh(2 * r) * HBAR / 2
    C = np.zeros((4, 4))
    C[:2, :2] = C[2:, 2:] = c * np.eye(2)
    C[:2, 2:] = C[2:, :2] = s * np.diag([1.0, -1.0])
    return C


def random_symplectic(rng, n_modes=2):
    """Random real symplectic matrix (product of orthogonal symplectic and squeezers)."""
    n = n_modes
    # unitary -> orthogonal symplectic in (x, p) interleaved ordering
    def orth_symplectic():
        Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        U, _ = np.linalg.qr(Z)
        X, Y = U.real, U.imag
        O = np.zeros((2 * n, 2 * n))
        O[0::2, 0::2] = X
        O[0::2, 1::2] = -Y
        O[1::2, 0::2] = Y
        O[1::2, 1::2] = X
        return O

    sq = np.exp(rng.normal(scale=0.7, size=n))
    Z = np.diag(np.ravel(np.column_stack([sq, 1 / sq])))
    return orth_symplectic() @ Z @ orth_symplectic()


def random_physical_covariance(rng, n_modes=2, max_excess=3.0):
    nu = HBAR / 2 + rng.uniform(0, max_excess, size=n_modes)
    S = random_symplectic(rng, n_modes)
    return S @ np.diag(np.repeat(nu, 2)) @ S.T
