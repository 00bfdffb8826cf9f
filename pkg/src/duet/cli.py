"""Command-line front end: one task per run, one CSV per task."""

import argparse
import os
import sys

import numpy as np

from . import config as cfgmod
from .covariance import stationary_covariance
from .errors import ConfigError, DuetError
from .gaussian import (
    epr_pair,
    logarithmic_negativity,
    mutual_information,
    ppt_hermitian_min_eigenvalue,
)
from .response import absorption_spectrum
from .spectra import (
    COORDS,
    fd_residual,
    heat_conductance_spectrum,
    heat_current_spectrum,
    levy_kosloff_sign,
    net_heat_current,
)
from .witness import epr_fixed_pair_spectra, optimal_quadrature_spectra, reference_spectra_T0


def write_csv(path, columns, rows):
    """Header line '# a,b,...', then rows; floats with 17 significant digits."""

    def fmt(v):
        if isinstance(v, str):
            return v
        return "%.17g" % v

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + ",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def task_absorption(cfg):
    w = cfg.omega_grid()
    pair, baths = cfg.pair(), cfg.baths()
    free = cfg.pair(lam=0.0)
    cols = [
        w,
        absorption_spectrum(pair, baths, w, (1.0, 0.0)),
        absorption_spectrum(pair, baths, w, (0.0, 1.0)),
        absorption_spectrum(free, baths, w, (1.0, 0.0)),
        absorption_spectrum(free, baths, w, (0.0, 1.0)),
    ]
    names = ["omega", "abs_drive1", "abs_drive2", "abs_uncoupled1", "abs_uncoupled2"]
    return names, zip(*cols)


def task_heat_spectrum(cfg):
    """Integrand of the heat current per d omega / 2 pi, and per unit Delta T."""
    w = cfg.omega_grid()
    pair, baths = cfg.pair(), cfg.baths()
    dT = cfg.T1 - cfg.T2
    if dT == 0:
        per_dT = heat_conductance_spectrum(pair, baths, w)
        spec = np.zeros_like(w)
    else:
        spec = heat_current_spectrum(pair, baths, w)
        per_dT = spec / dT
    return ["omega", "heat_spectrum", "heat_spectrum_per_dT"], zip(w, spec, per_dT)


def task_heat_sweep(cfg):
    gammas = cfg.gammas or (cfg.gamma1,)
    pair = cfg.pair()
    dT = cfg.T1 - cfg.T2
    sign = levy_kosloff_sign(pair, (cfg.T1, cfg.T2))
    rows = []
    for g in gammas:
        q, err = net_heat_current(pair, cfg.baths(gamma=g), cfg.quadrature(), full_output=True)
        rows.append((g, q, q / dT if dT else float("nan"), err, sign))
    return ["gamma", "heat_current", "heat_current_per_dT", "error", "levy_kosloff_sign"], rows


def task_covariance(cfg):
    cov = stationary_covariance(cfg.pair(), cfg.baths(), cfg.quadrature())
    rows = [
        (a, b, cov.C[i, j], cov.error[i, j])
        for i, a in enumerate(COORDS)
        for j, b in enumerate(COORDS)
        if j >= i
    ]
    return ["a", "b", "value", "error"], rows


def task_entanglement_sweep(cfg):
    rows = []
    baths, quad = cfg.baths(), cfg.quadrature()
    for g in cfg.g_grid():
        C = stationary_covariance(cfg.pair(lam=cfg.m1 * g * g), baths, quad)
        rows.append((
            g,
            ppt_hermitian_min_eigenvalue(C) + 0.5,
            epr_pair(C).uncertainty,
            logarithmic_negativity(C),
            mutual_information(C),
        ))
    names = ["g", "ppt_eigenvalue_shifted", "epr_uncertainty", "log_negativity", "mutual_information"]
    return names, rows


def task_witness_spectra(cfg):
    w = cfg.omega_grid()
    pair, baths = cfg.pair(), cfg.baths()
    cols, names = [w], ["omega"]
    for sector, tag in (("position", "x"), ("momentum", "p")):
        smin, smax, _ = optimal_quadrature_spectra(pair, baths, w, sector)
        ssum, sdiff = reference_spectra_T0(pair, baths, w, sector)
        cols += [smin, smax, ssum, sdiff]
        names += [f"S_min_{tag}", f"S_max_{tag}", f"S_sum_T0_{tag}", f"S_diff_T0_{tag}"]
    epr = epr_pair(stationary_covariance(pair, baths, cfg.quadrature()))
    sqq, spp = epr_fixed_pair_spectra(pair, baths, w, epr)
    cols += [sqq, spp]
    names += ["S_QQ_epr", "S_PP_epr"]
    return names, zip(*cols)


def task_fd_check(cfg):
    if cfg.T1 != cfg.T2:
        raise ConfigError("fd-check needs equal bath temperatures (T1 == T2)")
    w = cfg.omega_grid()
    res = fd_residual(cfg.pair(), cfg.baths(), w)
    return ["omega", "residual"], zip(w, res)


def task_oracle_check(cfg):
    from .oracle import build_model, steady_system_covariance

    pair, baths = cfg.pair(), cfg.baths()
    ref = stationary_covariance(pair, baths, cfg.quadrature())
    model = build_model(pair, baths, cfg.oracle_modes, cfg.oracle_modes)
    steady = steady_system_covariance(model)
    C = steady.covariance.C
    rows = [
        (f"C_{a}_{b}", ref.C[i, j], C[i, j])
        for i, a in enumerate(COORDS)
        for j, b in enumerate(COORDS)
        if j >= i
    ]
    if min(b.gamma for b in baths) > 0:
        rows.append(("heat_current", net_heat_current(pair, baths, cfg.quadrature()), steady.heat_current))
    rel = np.linalg.norm(C - ref.C) / np.linalg.norm(ref.C)
    rows.append(("relative_frobenius", 0.0, rel))
    return ["quantity", "frequency_domain", "oracle"], rows


TASK_FUNCS = {
    "absorption": task_absorption,
    "heat-spectrum": task_heat_spectrum,
    "heat-sweep": task_heat_sweep,
    "covariance": task_covariance,
    "entanglement-sweep": task_entanglement_sweep,
    "witness-spectra": task_witness_spectra,
    "fd-check": task_fd_check,
    "oracle-check": task_oracle_check,
}


def run_task(cfg, out=None):
    out = out or cfg.out
    if not out:
        raise ConfigError("no output path (--out or 'out = ...')")
    names, rows = TASK_FUNCS[cfg.task](cfg)
    write_csv(out, names, list(rows))
    return out


def _thread_limit():
    val = os.environ.get("DUET_THREADS")
    if not val:
        return None
    try:
        n = int(val)
    except ValueError:
        raise ConfigError(f"DUET_THREADS must be a positive integer, got {val!r}") from None
    if n < 1:
        raise ConfigError(f"DUET_THREADS must be a positive integer, got {val!r}")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="duet", description=__doc__)
    p.add_argument("--config", help="key = value config file (overrides the preset)")
    p.add_argument("--preset", help="bundled parameter set: " + ", ".join(cfgmod.PRESETS))
    p.add_argument("--task", choices=cfgmod.TASKS)
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--omega-points", type=int, dest="omega_points")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if not args.config and not args.preset:
            raise ConfigError("give --config, --preset or both")
        cfg = cfgmod.preset(args.preset) if args.preset else None
        if args.config:
            cfg = cfgmod.load_config(args.config, cfg)
        overrides = {}
        if args.task:
            overrides["task"] = args.task
        if args.omega_points is not None:
            overrides["omega_points"] = args.omega_points
        if args.out:
            overrides["out"] = args.out
        cfg = cfgmod.build_config(overrides, cfg)
        threads = _thread_limit()
        if threads:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=threads):
                path = run_task(cfg)
        else:
            path = run_task(cfg)
    except DuetError as exc:
        print(f"duet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
