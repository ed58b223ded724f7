"""Generalized Rabi Hamiltonian of the qubit + three-mode system.

All frequencies are in units of omega_a (omega_a = 1 fixes the time unit to
1/omega_a).  The time-dependent variant combines a sudden coupling switch-on
at t_on with a smoothed-step detuning of the qubit frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import mode_annihilation, mode_number, qubit_operator

MODES = ("a", "b", "c")


@dataclass(frozen=True)
class SystemParams:
    """Frequencies, couplings, mixing angle, and decay rates."""

    omega_a: float = 1.0
    omega_b: float = 1.5
    omega_c: float = 1.75
    omega_q: float = 2.5
    g_a: float = 0.0
    g_b: float = 0.0
    g_c: float = 0.0
    theta: float = 0.0
    kappa_a: float = 0.0
    kappa_b: float = 0.0
    kappa_c: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "omega_c", "omega_q"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("g_a", "g_b", "g_c", "kappa_a", "kappa_b", "kappa_c", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 <= self.theta <= math.pi / 2:
            raise ValueError("theta must lie in [0, pi/2]")

    @property
    def mode_frequencies(self):
        return (self.omega_a, self.omega_b, self.omega_c)

    @property
    def couplings(self):
        return (self.g_a, self.g_b, self.g_c)

    @property
    def mode_decay_rates(self):
        return (self.kappa_a, self.kappa_b, self.kappa_c)


def drift_hamiltonian(space, params, omega_q=None):
    """Uncoupled part: sum_j omega_j n_j + (omega_q / 2) sigma_z."""
    if omega_q is None:
        omega_q = params.omega_q
    h = 0.5 * omega_q * qubit_operator(space, "sigma_z")
    for mode, omega in zip(MODES, params.mode_frequencies):
        h += omega * mode_number(space, mode)
    return h


def coupling_operator(space, params):
    """Interaction term [sum_j g_j (a_j† + a_j)] (sigma_x cosθ + sigma_z sinθ)."""
    dim = space.dimension
    quad = np.zeros((dim, dim), dtype=np.complex128)
    for mode, g in zip(MODES, params.couplings):
        if g == 0.0:
            continue
        a = mode_annihilation(space, mode)
        quad += g * (a + a.conj().T)
    qubit_part = math.cos(params.theta) * qubit_operator(space, "sigma_x") + math.sin(
        params.theta
    ) * qubit_operator(space, "sigma_z")
    return quad @ qubit_part


def build_hamiltonian(space, params, omega_q=None):
    """Full generalized Rabi Hamiltonian for the given parameters."""
    return drift_hamiltonian(space, params, omega_q=omega_q) + coupling_operator(space, params)


@dataclass(frozen=True)
class TuningSchedule:
    """Smoothed-step qubit-frequency schedule with a coupling switch-on time.

    omega_q(t) = omega_q_initial for t <= t_i, then ramps smoothly (two
    Heaviside-gated sin² terms) to omega_q_initial + delta_omega_q, which it
    reaches at t_f = t_i + pi / (2 * smoothness) and keeps thereafter.
    Couplings are zero before t_on and at their configured values after.
    """

    omega_q_initial: float
    delta_omega_q: float
    t_on: float
    t_i: float
    smoothness: float

    def __post_init__(self):
        if self.smoothness <= 0:
            raise ValueError("smoothness must be > 0")
        if self.t_on > self.t_i:
            raise ValueError("t_on must not exceed t_i")

    @property
    def t_f(self):
        return self.t_i + math.pi / (2.0 * self.smoothness)


def qubit_frequency_at(schedule, t):
    """Evaluate the schedule; accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    a = schedule.smoothness
    ramp = np.where(t > schedule.t_i, np.sin(a * (t - schedule.t_i)) ** 2, 0.0)
    ramp = ramp + np.where(t > schedule.t_f, np.sin(a * (t - schedule.t_f)) ** 2, 0.0)
    # past t_f the two sin² terms sum to exactly 1; clamp rounding noise
    ramp = np.where(t >= schedule.t_f, 1.0, ramp)
    out = schedule.omega_q_initial + schedule.delta_omega_q * ramp
    return out if out.ndim else float(out)


def hamiltonian_at(space, params, schedule, t):
    """Hamiltonian at time t: scheduled qubit frequency, couplings gated by t_on."""
    h = drift_hamiltonian(space, params, omega_q=qubit_frequency_at(schedule, t))
    if t >= schedule.t_on:
        h = h + coupling_operator(space, params)
    return h
