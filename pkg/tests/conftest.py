"""Shared fixtures.  Protocol runs are expensive (minutes for the three-photon
process), so they are computed once per session and shared between the unit
tests and the acceptance suite."""

import math

import pytest

from bellghz import ProtocolConfig, decoherence_sweep, run_protocol


@pytest.fixture(scope="session")
def bell_configs():
    return {
        target: ProtocolConfig(target=target, g=0.1, theta=math.pi / 6.0)
        for target in ("B110", "B101", "B011")
    }


@pytest.fixture(scope="session")
def bell_runs(bell_configs):
    """Bell protocol results keyed by (target, gamma) for gamma in {0, 1e-3}."""
    from dataclasses import replace

    runs = {}
    for target, cfg in bell_configs.items():
        for gamma in (0.0, 1e-3):
            runs[(target, gamma)] = run_protocol(replace(cfg, gamma=gamma, kappa=None))
    return runs


@pytest.fixture(scope="session")
def ghz_config():
    return ProtocolConfig(target="GHZ", g=0.12, theta=0.0)


@pytest.fixture(scope="session")
def ghz_runs(ghz_config):
    """GHZ protocol results keyed by gamma, sharing one crossing search."""
    return dict(decoherence_sweep(ghz_config, [1e-4, 1e-3, 1e-2]))


@pytest.fixture(scope="session")
def all_protocol_runs(bell_runs, ghz_runs):
    runs = {f"{t} gamma={g:g}": r for (t, g), r in bell_runs.items()}
    runs.update({f"GHZ gamma={g:g}": r for g, r in ghz_runs.items()})
    return runs
