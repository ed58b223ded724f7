"""Two-step entanglement protocol: resonant Rabi transfer, detuning ramp,
fidelity tracking, and decoherence sweeps.

The qubit starts in an equal superposition with the couplings active and the
qubit frequency parked at the measured avoided crossing.  After a hold of
pi / (2 g_eff) the excitation has moved to the photons and the qubit is
detuned away, freezing a Bell or GHZ state in the resonator modes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .errors import ConfigError, IntegrationFailureError
from .hamiltonian import (
    SystemParams,
    TuningSchedule,
    coupling_operator,
    qubit_frequency_at,
)
from .hilbert import QUBIT_E, QUBIT_G, bare_state, build_space, qubit_operator
from .lindblad import CollapseChannel, check_density_matrix, evolve, standard_channels
from .spectrum import (
    diagonalize,
    find_avoided_crossing,
    identify_level,
    project_onto_levels,
    with_omega_q,
)

TARGETS = ("B110", "B101", "B011", "GHZ")

# Table of targets: photon pattern of |psi_n>, active modes, resonance sum.
_TARGET_PHOTONS = {
    "B110": (1, 1, 0),
    "B101": (1, 0, 1),
    "B011": (0, 1, 1),
    "GHZ": (1, 1, 1),
}


@dataclass(frozen=True)
class ProtocolConfig:
    """Full definition of one protocol run."""

    target: str = "B110"
    g: float = 0.1
    theta: float = math.pi / 6.0
    omega_b: float = 1.5
    omega_c: float = 1.75
    gamma: float = 1e-3
    kappa: float | None = None  # per-mode decay; defaults to gamma / 2
    t_on: float = 0.0
    delta_omega_q: float = -0.45
    ramp_smoothness: float = math.pi / 10.0
    hold_time: float | None = None  # defaults to pi / (2 g_eff_numeric)
    t_end_pad: float = 25.0
    dt: float = 0.005
    n_snapshots: int = 400
    cutoff_active: int = 4
    cutoff_inactive: int = 1
    total_excitation_cap: int | None = None
    energy_ceiling: float | None = None  # above ground, for dynamics truncation
    crossing_window: float = 0.15

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}, expected one of {TARGETS}")
        if self.target == "GHZ" and self.theta != 0.0:
            raise ConfigError("the GHZ process requires theta = 0")
        if self.g < 0 or self.gamma < 0 or (self.kappa is not None and self.kappa < 0):
            raise ConfigError("coupling and decay rates must be >= 0")
        if self.dt <= 0 or self.n_snapshots < 2:
            raise ConfigError("dt must be > 0 and n_snapshots >= 2")

    @property
    def target_photons(self):
        return _TARGET_PHOTONS[self.target]

    @property
    def active_modes(self):
        return tuple(m for m, n in zip("abc", self.target_photons) if n)

    @property
    def kappa_effective(self):
        return self.gamma / 2.0 if self.kappa is None else self.kappa

    def system_params(self, omega_q):
        gs = {f"g_{m}": (self.g if m in self.active_modes else 0.0) for m in "abc"}
        return SystemParams(
            omega_b=self.omega_b,
            omega_c=self.omega_c,
            omega_q=omega_q,
            theta=self.theta,
            kappa_a=self.kappa_effective,
            kappa_b=self.kappa_effective,
            kappa_c=self.kappa_effective,
            gamma=self.gamma,
            **gs,
        )

    def build_space(self):
        cutoffs = tuple(
            self.cutoff_active if m in self.active_modes else self.cutoff_inactive
            for m in "abc"
        )
        return build_space(cutoffs, self.total_excitation_cap)

    def resonance_sum(self):
        freqs = dict(a=1.0, b=self.omega_b, c=self.omega_c)
        return sum(freqs[m] for m in self.active_modes)


@dataclass(frozen=True)
class TargetFamily:
    """Phase-parameterized target states (|u> + e^{i phi} |v>) / sqrt(2)."""

    u: np.ndarray
    v: np.ndarray

    def state(self, phi):
        return (self.u + np.exp(1j * phi) * self.v) / math.sqrt(2.0)


@dataclass
class SimResult:
    """Time series and summary quantities of one protocol run."""

    t: np.ndarray
    pop_a: np.ndarray
    pop_b: np.ndarray
    pop_c: np.ndarray
    pop_qubit: np.ndarray
    omega_q_t: np.ndarray
    fidelity: np.ndarray
    final_fidelity: float
    phi_star: float
    omega_q_star: float
    g_eff_numeric: float
    hold_time: float
    schedule: TuningSchedule
    trace_err_max: float = 0.0
    herm_err_max: float = 0.0
    min_eigenvalue: float = 0.0
    truncation_population_max: float = 0.0
    snapshots: list = field(default_factory=list, repr=False)


def prepare_initial(space, params_resonant):
    """Pure-state density matrix of (|psi_0, g> + |psi_0, e>) / sqrt(2).

    Both components are dressed states of the coupled resonant Hamiltonian.
    The qubit-excited component sits exactly at the avoided crossing, so it is
    built by projecting the bare state onto the span of the two crossing
    eigenstates rather than matching a single level.
    """
    from .hamiltonian import build_hamiltonian

    decomp = diagonalize(build_hamiltonian(space, params_resonant))
    g_idx, _ = identify_level(decomp, bare_state(space, 0, 0, 0, QUBIT_G))
    psi_g = decomp.states[:, g_idx]

    bare_e = bare_state(space, 0, 0, 0, QUBIT_E)
    overlaps = np.abs(decomp.states.conj().T @ bare_e) ** 2
    top2 = np.argsort(overlaps)[-2:]
    psi_e, _ = project_onto_levels(decomp, top2, bare_e)

    vec = (psi_g + psi_e) / math.sqrt(2.0)
    return np.outer(vec, vec.conj())


def target_state(config, space, params_detuned):
    """Target family built from dressed eigenstates of the detuned Hamiltonian."""
    from .hamiltonian import build_hamiltonian

    decomp = diagonalize(build_hamiltonian(space, params_detuned))
    g_idx, _ = identify_level(decomp, bare_state(space, 0, 0, 0, QUBIT_G))
    n_idx, _ = identify_level(decomp, bare_state(space, *config.target_photons, QUBIT_G))
    return TargetFamily(decomp.states[:, g_idx], decomp.states[:, n_idx])


def fidelity(rho, target_family, phi_grid_step=1e-3):
    """Best fidelity sqrt(<psi(phi)|rho|psi(phi)>) over the free phase.

    Scans a coarse phase grid (1e-3 rad) and refines with golden-section
    search.  Returns (fidelity, phi*).
    """
    u, v = target_family.u, target_family.v
    a = float((u.conj() @ rho @ u).real)
    b = float((v.conj() @ rho @ v).real)
    c = complex(u.conj() @ rho @ v)

    def overlap(phi):
        return 0.5 * (a + b) + (np.exp(1j * phi) * c).real

    phis = np.arange(-math.pi, math.pi, phi_grid_step)
    vals = 0.5 * (a + b) + (np.exp(1j * phis) * c).real
    best = int(np.argmax(vals))

    lo, hi = phis[best] - phi_grid_step, phis[best] + phi_grid_step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
    f1, f2 = overlap(x1), overlap(x2)
    while hi - lo > 1e-10:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = overlap(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = overlap(x2)
    phi_star = 0.5 * (lo + hi)
    val = max(overlap(phi_star), 0.0)
    return math.sqrt(min(val, 1.0)), float(phi_star)


def _snapshot_grid(config, schedule, t_end):
    """Snapshot times: uniform grid plus the schedule breakpoints."""
    t_mid = 0.5 * (schedule.t_i + schedule.t_f)
    pts = np.linspace(0.0, t_end, config.n_snapshots)
    special = [schedule.t_on, schedule.t_i, t_mid, schedule.t_f]
    grid = np.unique(np.concatenate([pts, [s for s in special if 0.0 < s < t_end]]))
    return grid, t_mid


def locate_crossing(config, space=None):
    """Find the avoided crossing used by this protocol configuration."""
    if space is None:
        space = config.build_space()
    params = config.system_params(config.resonance_sum())
    bare_pair = ((0, 0, 0, QUBIT_E), config.target_photons + (QUBIT_G,))
    return find_avoided_crossing(
        space,
        params,
        config.resonance_sum(),
        config.crossing_window,
        bare_pair,
    )


def run_protocol(config, crossing=None):
    """Simulate the full protocol and return a SimResult.

    The integration runs in the truncated eigenbasis of the resonant coupled
    Hamiltonian (states above the energy ceiling are dropped; they stay
    unpopulated and the residual is reported).  Collapse operators are dressed
    with respect to the resonant Hamiltonian before the ramp midpoint and the
    detuned Hamiltonian after it.
    """
    from .hamiltonian import build_hamiltonian

    space = config.build_space()
    if crossing is None:
        crossing = locate_crossing(config, space)
    omega_q_star = crossing.omega_q_star
    g_eff = crossing.g_eff_numeric
    hold = config.hold_time if config.hold_time is not None else math.pi / (2.0 * g_eff)

    schedule = TuningSchedule(
        omega_q_initial=omega_q_star,
        delta_omega_q=config.delta_omega_q,
        t_on=config.t_on,
        t_i=config.t_on + hold,
        smoothness=config.ramp_smoothness,
    )
    t_end = schedule.t_f + config.t_end_pad

    params_res = config.system_params(omega_q_star)
    params_det = with_omega_q(params_res, omega_q_star + config.delta_omega_q)

    decomp_res = diagonalize(build_hamiltonian(space, params_res))
    decomp_det = diagonalize(build_hamiltonian(space, params_det))

    ceiling = (
        config.energy_ceiling
        if config.energy_ceiling is not None
        else omega_q_star + 2.5
    )
    keep = decomp_res.energies - decomp_res.energies[0] <= ceiling
    n_keep = int(np.sum(keep))
    if n_keep < 4:
        raise ConfigError("energy ceiling keeps too few states for the dynamics")
    basis = decomp_res.states[:, :n_keep]  # energies ascend, keep the lowest block

    def project_op(op):
        return np.ascontiguousarray(basis.conj().T @ op @ basis)

    # H(t) = H_resonant + (omega_q(t) - omega_q*) sigma_z/2 - [t < t_on] V
    h_res = np.diag(decomp_res.energies[:n_keep]).astype(np.complex128)
    z_half = project_op(0.5 * qubit_operator(space, "sigma_z"))
    v_proj = project_op(coupling_operator(space, params_res))

    def hamiltonian_fn(t):
        h = h_res + (qubit_frequency_at(schedule, t) - omega_q_star) * z_half
        if t < schedule.t_on:
            h = h - v_proj
        return h

    channels_res = [
        CollapseChannel(project_op(c.operator), c.rate)
        for c in standard_channels(decomp_res, space, params_res)
    ]
    channels_det = [
        CollapseChannel(project_op(c.operator), c.rate)
        for c in standard_channels(decomp_det, space, params_det)
    ]

    rho0 = prepare_initial(space, params_res)
    rho0 = basis.conj().T @ rho0 @ basis

    grid, t_mid = _snapshot_grid(config, schedule, t_end)
    i_mid = int(np.searchsorted(grid, t_mid))
    snaps1 = evolve(rho0, hamiltonian_fn, channels_res, grid[: i_mid + 1], dt=config.dt)
    snaps2 = evolve(snaps1[-1], hamiltonian_fn, channels_det, grid[i_mid:], dt=config.dt)
    snapshots = snaps1 + snaps2[1:]

    family_full = target_state(config, space, params_det)
    family = TargetFamily(basis.conj().T @ family_full.u, basis.conj().T @ family_full.v)

    mode_nums = {
        m: [ch.number_operator() for ch in chans]
        for m, chans in (("res", channels_res), ("det", channels_det))
    }
    pops = np.empty((len(snapshots), 4))
    fids = np.empty(len(snapshots))
    phis = np.empty(len(snapshots))
    trace_err = herm_err = 0.0
    min_eig = np.inf
    trunc_pop = 0.0
    for i, (t, rho) in enumerate(zip(grid, snapshots)):
        nums = mode_nums["res"] if t <= t_mid else mode_nums["det"]
        for k in range(4):
            pops[i, k] = max(float(np.einsum("ij,ji->", rho, nums[k]).real), 0.0)
        fids[i], phis[i] = fidelity(rho, family)
        te, he, me = check_density_matrix(rho, t=float(t))
        trace_err, herm_err = max(trace_err, te), max(herm_err, he)
        min_eig = min(min_eig, me)
        trunc_pop = max(trunc_pop, float(rho[-1, -1].real), float(rho[-2, -2].real))

    if trunc_pop > 1e-5:
        raise IntegrationFailureError(
            f"highest kept eigenstates reached population {trunc_pop:.2e}; "
            "raise the energy ceiling"
        )

    return SimResult(
        t=grid,
        pop_a=pops[:, 0],
        pop_b=pops[:, 1],
        pop_c=pops[:, 2],
        pop_qubit=pops[:, 3],
        omega_q_t=np.asarray(qubit_frequency_at(schedule, grid)),
        fidelity=fids,
        final_fidelity=float(fids[-1]),
        phi_star=float(phis[-1]),
        omega_q_star=omega_q_star,
        g_eff_numeric=g_eff,
        hold_time=hold,
        schedule=schedule,
        trace_err_max=trace_err,
        herm_err_max=herm_err,
        min_eigenvalue=float(min_eig),
        truncation_population_max=trunc_pop,
        snapshots=snapshots,
    )


def decoherence_sweep(config, gamma_list, threads=1):
    """Run the protocol once per qubit decay rate (kappa_j = gamma / 2).

    Returns a list of (gamma, SimResult) in input order.  The crossing search
    does not depend on the decay rates and is shared across runs.
    """
    gamma_list = list(gamma_list)
    if not gamma_list:
        raise ConfigError("gamma list must not be empty")
    if any(g < 0 for g in gamma_list):
        raise ConfigError("decay rates must be >= 0")

    crossing = locate_crossing(config)
    configs = [dc_replace(config, gamma=g, kappa=None) for g in gamma_list]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: run_protocol(c, crossing=crossing), configs))
    else:
        results = [run_protocol(c, crossing=crossing) for c in configs]
    return list(zip(gamma_list, results))
