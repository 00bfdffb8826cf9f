"""Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands.

All panels of one refinement pass are evaluated in a single vectorised call,
so the integrand must accept a 1-d array of abscissae and return an array of
shape ``(len(x), n_out)``. Panels are kept sorted by their left edge and
reductions run in that order, which makes results bit-reproducible.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, ConvergenceError

_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# full 15-point node set on [-1, 1] and the matching weights
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_gauss_idx = [1, 3, 5, 7, 9, 11, 13]
_GW[_gauss_idx] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for frequency integrals over [0, inf).

    ``omega_max`` splits the range: [0, omega_max] is integrated directly and,
    when ``tail`` is set, [omega_max, inf) through the map omega = omega_max/u.
    With ``tail=False`` the integral is truncated at omega_max and an
    analytic power-law bound on the missing tail enters the error estimate.
    ``None`` for omega_max means "pick from the physical parameters".
    """

    omega_max: float = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    seed_points: tuple = ()
    tail: bool = True
    max_panels: int = 50000

    def __post_init__(self):
        if self.omega_max is not None and not self.omega_max > 0:
            raise ConfigError("omega_max must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ConfigError("quadrature tolerances must be positive")

    def resolved(self, pair, baths):
        """Fill in omega_max and seed points from normal modes and bath cutoffs."""
        from .response import lossless_eigenfrequencies

        wp, wm = lossless_eigenfrequencies(pair)
        cutoffs = tuple(1.0 / b.tau_c for b in baths)
        W = self.omega_max
        if W is None:
            W = max(20.0 * wp, 20.0 * max(cutoffs))
        seeds = tuple(sorted(set(self.seed_points) | {wm, wp, pair.omega10, pair.omega20} | set(cutoffs)))
        return replace(self, omega_max=float(W), seed_points=seeds)


@dataclass
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    l1: np.ndarray = field(repr=False)
    n_panels: int = 0
    n_evals: int = 0


def _gk_panels(func, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(func(x), dtype=float)
    if fx.ndim == 1:
        fx = fx[:, None]
    fx = fx.reshape(len(a), 15, -1)
    k = np.einsum("pnk,n->pk", fx, _KW) * half[:, None]
    g = np.einsum("pnk,n->pk", fx, _GW) * half[:, None]
    l1 = np.einsum("pnk,n->pk", np.abs(fx), _KW) * half[:, None]
    return k, np.abs(k - g), l1


def adaptive_gk(func, breakpoints, rel_tol, abs_tol, max_panels=50000):
    """Integrate ``func`` over [breakpoints[0], breakpoints[-1]].

    Refinement stops once, for every output component e,
    sum of panel errors <= max(abs_tol, rel_tol * int |f_e|).
    Returns a :class:`QuadResult`; the error includes a round-off floor.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    a, b = edges[:-1], edges[1:]
    K, E, L = _gk_panels(func, a, b)
    n_evals = 15 * len(a)
    while True:
        total_l1 = L.sum(axis=0)
        tol = np.maximum(abs_tol, rel_tol * total_l1)
        err = E.sum(axis=0)
        if np.all(err <= tol):
            break
        ratio = (E / tol[None, :]).max(axis=1)
        split = ratio * len(a) > 1.0
        if not np.any(split):
            split = ratio >= ratio.max()
        if len(a) + split.sum() > max_panels:
            raise ConvergenceError(
                f"quadrature did not reach tolerance within {max_panels} panels "
                f"(worst relative error {float(np.max(err / np.maximum(total_l1, 1e-300))):.3g})"
            )
        sa, sb = a[split], b[split]
        m = 0.5 * (sa + sb)
        na = np.concatenate([sa, m])
        nb = np.concatenate([m, sb])
        k2, e2, l2 = _gk_panels(func, na, nb)
        n_evals += 15 * len(na)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        K = np.concatenate([K[keep], k2])
        E = np.concatenate([E[keep], e2])
        L = np.concatenate([L[keep], l2])
        order = np.argsort(a, kind="stable")
        a, b, K, E, L = a[order], b[order], K[order], E[order], L[order]
    l1 = L.sum(axis=0)
    value = K.sum(axis=0)
    error = E.sum(axis=0) + 50.0 * np.finfo(float).eps * l1
    return QuadResult(value, error, l1, len(a), n_evals)


def _initial_breakpoints(seeds, W):
    pts = [0.0] + [s for s in seeds if 0 < s < W] + [W]
    pts = sorted(set(pts))
    out = [pts[0]]
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo > 0 and hi / lo > 4.0:
            n = int(np.ceil(np.log(hi / lo) / np.log(2.0)))
            out.extend(np.geomspace(lo, hi, n + 1)[1:])
        else:
            out.extend(np.linspace(lo, hi, 5)[1:])
    return np.array(out)


def integrate_frequency(func, config):
    """int_0^inf d omega func(omega) for a vector-valued integrand.

    ``config`` must be resolved (omega_max set).
    """
    W = config.omega_max
    if W is None:
        raise ConfigError("quadrature config has no omega_max; call .resolved() first")
    head = adaptive_gk(func, _initial_breakpoints(config.seed_points, W),
                       config.rel_tol, config.abs_tol, config.max_panels)
    if config.tail:
        def mapped(u):
            fx = np.asarray(func(W / u), dtype=float)
            if fx.ndim == 1:
                fx = fx[:, None]
            return fx * (W / u**2)[:, None]

        tail = adaptive_gk(mapped, np.linspace(0.0, 1.0, 9), config.rel_tol,
                           config.abs_tol, config.max_panels)
        return QuadResult(head.value + tail.value, head.error + tail.error,
                          head.l1 + tail.l1, head.n_panels + tail.n_panels,
                          head.n_evals + tail.n_evals)
    fW = np.abs(np.atleast_2d(np.asarray(func(np.array([W])), dtype=float)))[0]
    # integrands fall off at least like omega^-3 beyond the bath cutoff; the
    # omega^-2 bound W f(W) leaves room for the approach to that power law
    bound = W * fW
    return QuadResult(head.value, head.error + bound, head.l1, head.n_panels, head.n_evals)
