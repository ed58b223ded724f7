"""Command-line front end: four analyses, flat YAML configs, deterministic CSV.

Subcommands: ``spectrum`` (energy levels vs qubit frequency), ``geff``
(numeric vs analytic effective coupling), ``protocol`` (one protocol run),
``sweep`` (protocol fidelity for several decay rates).  Every CSV starts with
``#`` comment lines echoing the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np
import yaml

from . import __version__
from .errors import BellGhzError, ConfigError, SearchFailureError
from .hamiltonian import SystemParams
from .hilbert import QUBIT_E, QUBIT_G, build_space
from .perturbation import g_eff_bell_closed, g_eff_ghz_closed
from .protocol import ProtocolConfig, decoherence_sweep, run_protocol
from .spectrum import find_avoided_crossing, scan_levels

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

_GEFF_PROCESSES = {
    "bell_ab": (("a", "b"), (1, 1, 0)),
    "bell_ac": (("a", "c"), (1, 0, 1)),
    "bell_bc": (("b", "c"), (0, 1, 1)),
    "ghz": (("a", "b", "c"), (1, 1, 1)),
}

_SPECTRUM_DEFAULTS = {
    "omega_b": 1.5,
    "omega_c": 1.75,
    "g": 0.1,
    "theta": math.pi / 6.0,
    "omega_q_min": 2.2,
    "omega_q_max": 4.6,
    "omega_q_points": 121,
    "num_levels": 12,
    "cutoff_a": 4,
    "cutoff_b": 4,
    "cutoff_c": 4,
    "total_excitation_cap": None,
}

_GEFF_DEFAULTS = {
    "process": "bell_ab",
    "omega_b": 1.5,
    "omega_c": 1.75,
    "theta": math.pi / 6.0,
    "g_min": 0.02,
    "g_max": 0.2,
    "g_points": 10,
    "cutoff": 4,
    "total_excitation_cap": None,
    "window": None,  # default derived from g below
}

_PROTOCOL_DEFAULTS = {
    "target": "B110",
    "g": 0.1,
    "theta": math.pi / 6.0,
    "omega_b": 1.5,
    "omega_c": 1.75,
    "gamma": 1e-3,
    "kappa": None,
    "t_on": 0.0,
    "delta_omega_q": -0.45,
    "ramp_smoothness": math.pi / 10.0,
    "hold_time": None,
    "t_end_pad": 25.0,
    "dt": 0.005,
    "n_snapshots": 400,
    "cutoff_active": 4,
    "cutoff_inactive": 1,
    "total_excitation_cap": None,
    "energy_ceiling": None,
    "crossing_window": 0.15,
}

_SWEEP_DEFAULTS = dict(_PROTOCOL_DEFAULTS, gamma_values=[1e-5, 1e-4, 1e-3, 1e-2])
del _SWEEP_DEFAULTS["gamma"]


def load_config(path, defaults):
    """Merge a flat YAML key-value file over the defaults; reject unknown keys."""
    resolved = dict(defaults)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            loaded = yaml.safe_load(fh)
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must contain a flat key-value mapping")
        unknown = sorted(set(loaded) - set(defaults))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        resolved.update(loaded)
    return resolved


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path, meta, columns, rows):
    """Write a CSV with '#'-prefixed metadata lines, UTF-8, LF line endings."""
    lines = [f"# {key} = {_fmt(meta[key])}" for key in sorted(meta)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_spectrum(config, out_path, threads=1):
    cfg = load_config(config, _SPECTRUM_DEFAULTS)
    if cfg["omega_q_points"] < 2 or cfg["omega_q_max"] <= cfg["omega_q_min"]:
        raise ConfigError("invalid omega_q grid")
    space = build_space(
        (cfg["cutoff_a"], cfg["cutoff_b"], cfg["cutoff_c"]), cfg["total_excitation_cap"]
    )
    params = SystemParams(
        omega_b=cfg["omega_b"],
        omega_c=cfg["omega_c"],
        omega_q=max(cfg["omega_q_min"], 1e-6),
        g_a=cfg["g"],
        g_b=cfg["g"],
        g_c=cfg["g"],
        theta=cfg["theta"],
    )
    grid = np.linspace(cfg["omega_q_min"], cfg["omega_q_max"], cfg["omega_q_points"])
    energies = scan_levels(space, params, grid, num_levels=cfg["num_levels"])
    columns = ["omega_q"] + [f"E_{k}" for k in range(cfg["num_levels"])]
    rows = [[wq, *row] for wq, row in zip(grid, energies)]
    write_csv(out_path, dict(cfg, analysis="spectrum"), columns, rows)


def cmd_geff(config, out_path, threads=1):
    cfg = load_config(config, _GEFF_DEFAULTS)
    if cfg["process"] not in _GEFF_PROCESSES:
        raise ConfigError(
            f"unknown process {cfg['process']!r}; expected one of {sorted(_GEFF_PROCESSES)}"
        )
    if cfg["g_points"] < 1 or cfg["g_max"] < cfg["g_min"] or cfg["g_min"] <= 0:
        raise ConfigError("invalid g grid")
    modes, photons = _GEFF_PROCESSES[cfg["process"]]
    is_ghz = cfg["process"] == "ghz"
    theta = 0.0 if is_ghz else cfg["theta"]
    freqs = dict(a=1.0, b=cfg["omega_b"], c=cfg["omega_c"])
    resonance = sum(freqs[m] for m in modes)
    cutoffs = tuple(cfg["cutoff"] if m in modes else 1 for m in "abc")
    space = build_space(cutoffs, cfg["total_excitation_cap"])
    bare_pair = ((0, 0, 0, QUBIT_E), photons + (QUBIT_G,))

    rows = []
    for g in np.linspace(cfg["g_min"], cfg["g_max"], cfg["g_points"]):
        gs = {f"g_{m}": (g if m in modes else 0.0) for m in "abc"}
        params = SystemParams(
            omega_b=cfg["omega_b"],
            omega_c=cfg["omega_c"],
            omega_q=resonance,
            theta=theta,
            **gs,
        )
        analytic = g_eff_ghz_closed(params) if is_ghz else g_eff_bell_closed(params, modes)
        window = cfg["window"]
        if window is None:
            window = max(0.12, (6.0 if is_ghz else 8.0) * g * g)
        try:
            crossing = find_avoided_crossing(space, params, resonance, window, bare_pair)
            numeric = crossing.g_eff_numeric
            rel = abs(numeric - abs(analytic)) / abs(analytic)
            rows.append([g, numeric, analytic, rel, "ok"])
        except SearchFailureError:
            rows.append([g, math.nan, analytic, math.nan, "search-failure"])
    columns = ["g_over_omega_a", "geff_numeric", "geff_analytic", "rel_deviation", "status"]
    write_csv(out_path, dict(cfg, analysis="geff"), columns, rows)


def _protocol_config(cfg):
    try:
        return ProtocolConfig(**{k: v for k, v in cfg.items() if k in _PROTOCOL_DEFAULTS})
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _protocol_rows(result):
    rows = []
    for i, t in enumerate(result.t):
        rows.append(
            [
                t,
                result.pop_a[i],
                result.pop_b[i],
                result.pop_c[i],
                result.pop_qubit[i],
                result.omega_q_t[i],
                result.fidelity[i],
            ]
        )
    return rows


_PROTOCOL_COLUMNS = ["t", "pop_a", "pop_b", "pop_c", "pop_qubit", "omega_q_of_t", "fidelity"]


def cmd_protocol(config, out_path, threads=1):
    cfg = load_config(config, _PROTOCOL_DEFAULTS)
    result = run_protocol(_protocol_config(cfg))
    meta = dict(
        cfg,
        analysis="protocol",
        omega_q_star=result.omega_q_star,
        g_eff_numeric=result.g_eff_numeric,
        resolved_hold_time=result.hold_time,
        final_fidelity=result.final_fidelity,
    )
    write_csv(out_path, meta, _PROTOCOL_COLUMNS, _protocol_rows(result))


def cmd_sweep(config, out_path, threads=1):
    cfg = load_config(config, _SWEEP_DEFAULTS)
    gammas = cfg["gamma_values"]
    if not isinstance(gammas, (list, tuple)) or len(gammas) == 0:
        raise ConfigError("gamma_values must be a nonempty list")
    base = _protocol_config({k: v for k, v in cfg.items() if k != "gamma_values"})
    results = decoherence_sweep(base, [float(g) for g in gammas], threads=threads)
    rows = []
    for gamma, result in results:
        for t, f in zip(result.t, result.fidelity):
            rows.append([gamma, t, f])
    write_csv(out_path, dict(cfg, analysis="sweep", gamma_values=list(gammas)),
              ["gamma", "t", "fidelity"], rows)


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "geff": cmd_geff,
    "protocol": cmd_protocol,
    "sweep": cmd_sweep,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bellghz",
        description="Bell/GHZ photonic-state generation via an ultrastrongly "
        "coupled qubit: spectra, effective couplings, and dissipative protocol runs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("spectrum", "energy levels versus qubit frequency"),
        ("geff", "numeric vs analytic effective coupling over a coupling grid"),
        ("protocol", "one dissipative protocol run (populations and fidelity)"),
        ("sweep", "protocol fidelity for a list of decay rates"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", default=None, help="flat YAML config file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args.config, args.out, threads=args.threads)
    except (ConfigError, FileNotFoundError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (BellGhzError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
