"""Run configuration: flat ``key = value`` text files and bundled presets.

All quantities are nondimensional (hbar = k_B = m1 = omega10 = 1).
"""

from dataclasses import asdict, dataclass, fields, replace
import math

import numpy as np

from .bath import BathSpec
from .errors import ConfigError
from .quadrature import QuadratureConfig
from .response import OscillatorPair

TASKS = (
    "absorption",
    "heat-spectrum",
    "heat-sweep",
    "covariance",
    "entanglement-sweep",
    "witness-spectra",
    "fd-check",
    "oracle-check",
)


@dataclass(frozen=True)
class RunConfig:
    # oscillators
    omega10: float = 1.0
    omega20: float = 1.0
    lam: float = 0.0
    m1: float = 1.0
    m2: float = 1.0
    # baths
    gamma1: float = 0.1
    gamma2: float = 0.1
    tau_c1: float = 0.02
    tau_c2: float = 0.02
    T1: float = 0.0
    T2: float = 0.0
    # frequency grid for spectra
    omega_min: float = 0.0
    omega_max: float = 3.0
    omega_points: int = 601
    # sweeps
    gammas: tuple = ()
    g_min: float = 0.05
    g_max: float = 0.8
    g_points: int = 76
    # adaptive quadrature; quad_omega_max = 0 means automatic
    quad_rel_tol: float = 1e-10
    quad_abs_tol: float = 1e-14
    quad_omega_max: float = 0.0
    # finite-bath oracle
    oracle_modes: int = 1500
    task: str = "covariance"
    out: str = ""

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {', '.join(TASKS)}")
        if self.omega_points < 2:
            raise ConfigError("omega_points must be >= 2")
        if not 0 <= self.omega_min < self.omega_max:
            raise ConfigError("need 0 <= omega_min < omega_max")
        if self.g_points < 2 or not 0 <= self.g_min < self.g_max:
            raise ConfigError("need g_points >= 2 and 0 <= g_min < g_max")
        if self.quad_omega_max < 0:
            raise ConfigError("quad_omega_max must be >= 0")
        if any(g < 0 for g in self.gammas):
            raise ConfigError("gammas must be non-negative")
        # type-level invariants are checked by constructing the physical objects
        self.pair()
        self.baths()
        self.quadrature()

    def pair(self, lam=None):
        return OscillatorPair.from_frequencies(
            self.omega10, self.omega20, self.lam if lam is None else lam, self.m1, self.m2
        )

    def baths(self, gamma=None):
        g1 = self.gamma1 if gamma is None else gamma
        g2 = self.gamma2 if gamma is None else gamma
        return (BathSpec(g1, self.tau_c1, self.T1), BathSpec(g2, self.tau_c2, self.T2))

    def quadrature(self):
        return QuadratureConfig(
            omega_max=self.quad_omega_max or None,
            rel_tol=self.quad_rel_tol,
            abs_tol=self.quad_abs_tol,
        )

    def omega_grid(self):
        return np.linspace(self.omega_min, self.omega_max, self.omega_points)

    def g_grid(self):
        return np.linspace(self.g_min, self.g_max, self.g_points)


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _format(value):
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(name, text):
    default = _FIELDS[name].default
    if name == "gammas":
        return tuple(float(t) for t in text.split(",") if t.strip())
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        v = float(text)
        if v != int(v):
            raise ValueError("not an integer")
        return int(v)
    if isinstance(default, float):
        v = float(text)
        if not math.isfinite(v):
            raise ValueError("not finite")
        return v
    return text


def parse_config(text, base=None):
    """Parse config text; keys override ``base`` (a RunConfig or None)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _parse_value(key, val)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    return build_config(values, base)


def build_config(values, base=None):
    try:
        if base is None:
            return RunConfig(**values)
        return replace(base, **values)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def emit_config(cfg):
    return "".join(f"{k} = {_format(v)}\n" for k, v in asdict(cfg).items())


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base)


# Parameter sets of the three regimes used throughout.
_CASE = {
    "a": dict(omega20=1.15, gamma1=0.1, gamma2=0.1, tau_c1=0.02, tau_c2=0.02, lam=0.09),
    "b": dict(omega20=1.0, gamma1=0.4, gamma2=0.2, tau_c1=0.02, tau_c2=0.02, lam=0.27),
    "c": dict(omega20=1.0, gamma1=0.25, gamma2=0.217, tau_c1=0.5, tau_c2=0.5, lam=0.36),
}

PRESETS = {
    "fig1a": dict(_CASE["a"], task="absorption"),
    "fig1b": dict(_CASE["b"], task="absorption"),
    "fig1c": dict(_CASE["c"], task="absorption"),
    # linear response around T = 1
    "fig3left_a": dict(_CASE["a"], T1=1.0, T2=1.0, task="heat-spectrum"),
    "fig3left_b": dict(_CASE["b"], T1=1.0, T2=1.0, task="heat-spectrum"),
    "fig3left_c": dict(_CASE["c"], T1=1.0, T2=1.0, task="heat-spectrum"),
    "fig3right": dict(
        omega20=0.6, lam=0.36, gamma1=0.1, gamma2=0.1, tau_c1=0.02, tau_c2=0.02,
        T1=5.0, T2=4.0, gammas=(0.01, 0.1, 0.4), task="heat-sweep",
    ),
    "fig4": dict(_CASE["a"], T1=0.1, T2=0.15, task="entanglement-sweep"),
    "fig4c": dict(_CASE["c"], T1=0.1, T2=0.15, task="entanglement-sweep"),
    "fig5": dict(_CASE["b"], T1=0.5, T2=0.25, task="witness-spectra"),
}


def preset(name):
    try:
        values = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
    return build_config(dict(values))
