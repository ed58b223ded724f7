import math
from dataclasses import replace

import numpy as np
import pytest

from bellghz.errors import ConfigError
from bellghz.hilbert import QUBIT_E, QUBIT_G, bare_state
from bellghz.protocol import (
    ProtocolConfig,
    TargetFamily,
    decoherence_sweep,
    fidelity,
    locate_crossing,
    prepare_initial,
    target_state,
)


def test_config_validation():
    with pytest.raises(ConfigError):
        ProtocolConfig(target="B111")
    with pytest.raises(ConfigError):
        ProtocolConfig(target="GHZ", theta=0.1)
    with pytest.raises(ConfigError):
        ProtocolConfig(gamma=-1e-3)
    with pytest.raises(ConfigError):
        ProtocolConfig(dt=0.0)


def test_config_derived_quantities():
    cfg = ProtocolConfig(target="B101", g=0.1)
    assert cfg.active_modes == ("a", "c")
    assert cfg.target_photons == (1, 0, 1)
    assert cfg.resonance_sum() == pytest.approx(2.75)
    assert cfg.kappa_effective == pytest.approx(cfg.gamma / 2.0)
    assert replace(cfg, kappa=1e-4).kappa_effective == 1e-4
    params = cfg.system_params(2.75)
    assert params.g_a == 0.1 and params.g_b == 0.0 and params.g_c == 0.1
    space = cfg.build_space()
    assert space.mode_cutoffs == (4, 1, 4)


def test_fidelity_recovers_known_phase():
    rng = np.random.default_rng(11)
    dim = 12
    u = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    u /= np.linalg.norm(u)
    # orthogonalize v against u
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v -= (u.conj() @ v) * u
    v /= np.linalg.norm(v)
    family = TargetFamily(u, v)
    psi = family.state(0.7)
    rho = np.outer(psi, psi.conj())
    f, phi = fidelity(rho, family)
    assert f == pytest.approx(1.0, abs=1e-9)
    assert phi == pytest.approx(0.7, abs=1e-6)
    # the maximally mixed state scores sqrt(1/dim)
    f_mixed, _ = fidelity(np.eye(dim, dtype=complex) / dim, family)
    assert f_mixed == pytest.approx(math.sqrt(1.0 / dim), abs=1e-9)


def test_prepare_initial_is_pure_equal_superposition(bell_configs):
    cfg = bell_configs["B110"]
    space = cfg.build_space()
    crossing = locate_crossing(cfg, space)
    params = cfg.system_params(crossing.omega_q_star)
    rho0 = prepare_initial(space, params)
    assert np.trace(rho0).real == pytest.approx(1.0)
    assert np.trace(rho0 @ rho0).real == pytest.approx(1.0, abs=1e-12)
    # half the weight sits on the qubit-excited sector (dressing corrections aside)
    bare_e = bare_state(space, 0, 0, 0, QUBIT_E)
    bare_g = bare_state(space, 0, 0, 0, QUBIT_G)
    assert (bare_e.conj() @ rho0 @ bare_e).real > 0.35
    assert (bare_g.conj() @ rho0 @ bare_g).real > 0.35


def test_target_state_photon_content(bell_configs):
    cfg = bell_configs["B110"]
    space = cfg.build_space()
    crossing = locate_crossing(cfg, space)
    params = cfg.system_params(crossing.omega_q_star + cfg.delta_omega_q)
    family = target_state(cfg, space, params)
    bare_n = bare_state(space, 1, 1, 0, QUBIT_G)
    assert abs(bare_n.conj() @ family.v) ** 2 > 0.9
    assert abs(family.u.conj() @ family.v) < 1e-10


def test_bell_run_summary(bell_runs):
    res = bell_runs[("B110", 0.0)]
    assert res.t[0] == 0.0
    assert res.final_fidelity == res.fidelity[-1]
    # at t = 0 only the ground component overlaps the target family, so
    # F = sqrt(<psi|rho|psi>) starts near sqrt(1/2 * 1/2)
    assert res.fidelity[0] == pytest.approx(0.5, abs=0.06)
    assert res.final_fidelity > res.fidelity[0]
    # photons end up shared between modes a and b, the qubit ends near its ground state
    assert res.pop_a[-1] == pytest.approx(0.5, abs=0.05)
    assert res.pop_b[-1] == pytest.approx(0.5, abs=0.05)
    assert res.pop_c[-1] == pytest.approx(0.0, abs=0.01)
    assert res.pop_qubit[-1] < 0.05
    assert res.hold_time == pytest.approx(math.pi / (2.0 * res.g_eff_numeric))
    # schedule breakpoints are snapshot times
    for special in (res.schedule.t_i, res.schedule.t_f):
        assert np.min(np.abs(res.t - special)) < 1e-12
    assert res.omega_q_t[0] == pytest.approx(res.omega_q_star)
    assert res.omega_q_t[-1] == pytest.approx(res.omega_q_star - 0.45)


def test_rabi_oscillation_midpoint(bell_runs):
    # halfway through the hold the excitation is shared between qubit and photons
    res = bell_runs[("B110", 0.0)]
    i_half = int(np.argmin(np.abs(res.t - 0.5 * res.hold_time)))
    assert 0.1 < res.pop_qubit[i_half] < 0.4
    assert res.pop_qubit[0] == pytest.approx(0.5, abs=0.05)


def test_dissipation_lowers_fidelity(bell_runs):
    for target in ("B110", "B101", "B011"):
        assert bell_runs[(target, 1e-3)].final_fidelity < bell_runs[(target, 0.0)].final_fidelity


def test_sweep_shares_crossing_and_orders_results(bell_configs):
    cfg = replace(bell_configs["B110"], n_snapshots=60, t_end_pad=5.0)
    gammas = [1e-5, 1e-4, 1e-3, 1e-2]
    results = decoherence_sweep(cfg, gammas, threads=2)
    assert [g for g, _ in results] == gammas
    assert len({r.omega_q_star for _, r in results}) == 1
    # final fidelity decreases monotonically with the decay rate
    fids = [r.final_fidelity for _, r in results]
    assert all(a > b for a, b in zip(fids, fids[1:]))


def test_sweep_rejects_bad_gammas(bell_configs):
    with pytest.raises(ConfigError):
        decoherence_sweep(bell_configs["B110"], [])
    with pytest.raises(ConfigError):
        decoherence_sweep(bell_configs["B110"], [-1e-4])
