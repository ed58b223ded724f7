"""Analytic effective couplings and the generic transition-path-sum engine.

Bare states are tuples (n_1, ..., n_m, q) with q = 0 (g) or 1 (e).  A single
application of the interaction V = [sum_j g_j (a_j† + a_j)] (sigma_x cosθ +
sigma_z sinθ) changes exactly one mode occupation by ±1 and either flips the
qubit (sigma_x vertex, weight cosθ) or leaves it with a sign (sigma_z vertex,
weight ±sinθ, + for e).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DivergentDenominatorError

DENOMINATOR_GUARD = 1e-6  # in units of omega_a
COMMENSURABILITY_TOL = 1e-9


def g_eff_bell_closed(params, mode_pair=("a", "b")):
    """Closed-form second-order effective coupling for a two-mode Bell process.

    Returns -g_i g_j (omega_i + omega_j) sin(2θ) / (omega_i omega_j) for the
    selected mode pair.  Zero (with a warning) at θ = 0, where the required
    longitudinal coupling vanishes.
    """
    (w_i, g_i), (w_j, g_j) = (_mode_params(params, m) for m in mode_pair)
    if params.theta == 0.0:
        warnings.warn(
            "theta = 0: longitudinal coupling is required for a nonzero Bell "
            "effective coupling",
            stacklevel=2,
        )
    return -g_i * g_j * (w_i + w_j) * math.sin(2.0 * params.theta) / (w_i * w_j)


def g_eff_ghz_closed(params):
    """Closed-form third-order effective coupling for the GHZ process (θ = 0)."""
    w_a, w_b, w_c = params.mode_frequencies
    g_a, g_b, g_c = params.couplings
    return (
        -4.0
        * g_a
        * g_b
        * g_c
        * (w_a + w_b + w_c)
        / ((w_a + w_b) * (w_a + w_c) * (w_b + w_c))
    )


def _mode_params(params, mode):
    freqs = dict(zip("abc", params.mode_frequencies))
    gs = dict(zip("abc", params.couplings))
    if mode not in freqs:
        raise ValueError(f"invalid mode {mode!r}")
    return freqs[mode], gs[mode]


@dataclass(frozen=True)
class TransitionPath:
    """One chain of bare states from |i> to |f| with its V elements.

    ``denominators`` holds E_i - E_n for each intermediate state, evaluated at
    the resonance qubit frequency.
    """

    states: tuple
    hop_elements: tuple
    denominators: tuple

    @property
    def contribution(self):
        num = 1.0
        for v in self.hop_elements:
            num *= v
        den = 1.0
        for d in self.denominators:
            den *= d
        return num / den


def _select_mode_params(params, state, modes):
    n_modes = len(state) - 1
    if modes is None:
        modes = "abc"[:n_modes]
    if len(modes) != n_modes:
        raise ValueError("number of modes does not match the state length")
    pairs = [_mode_params(params, m) for m in modes]
    freqs = tuple(p[0] for p in pairs)
    gs = tuple(p[1] for p in pairs)
    return freqs, gs


def _resonant_omega_q(initial, final, freqs):
    """Qubit frequency at which E_i = E_f (the resonance condition)."""
    qi, qf = initial[-1], final[-1]
    if qi == qf:
        raise ValueError("initial and final states must differ in the qubit level")
    dphot = sum((nf - ni) * w for ni, nf, w in zip(initial[:-1], final[:-1], freqs))
    omega_q = dphot if qi > qf else -dphot
    if omega_q <= 0:
        raise ValueError("states do not define a positive resonance frequency")
    return omega_q

def _bare_energy(state, freqs, omega_q):
    e = sum(n * w for n, w in zip(state[:-1], freqs))
    return e + (0.5 if state[-1] == 1 else -0.5) * omega_q


def _hops(state, freqs, gs, theta):
    """All (target, V element) pairs reachable by one application of V."""
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    *ns, q = state
    out = []
    for j, g in enumerate(gs):
        if g == 0.0:
            continue
        for dn in (+1, -1):
            n_new = ns[j] + dn
            if n_new < 0:
                continue
            amp = g * math.sqrt(max(ns[j], n_new))
            photons = list(ns)
            photons[j] = n_new
            if cos_t != 0.0:
                out.append((tuple(photons) + (1 - q,), amp * cos_t))
            if sin_t != 0.0:
                sign = 1.0 if q == 1 else -1.0
                out.append((tuple(photons) + (q,), amp * sign * sin_t))
    return out


def enumerate_paths(initial, final, order, params, modes=None):
    """All order-length chains of nonzero V hops from |i> to |f|.

    ``modes`` selects which system modes the state entries refer to
    (default: the first len(state) - 1 of 'a', 'b', 'c').  Energy denominators
    are evaluated at the resonance qubit frequency.
    """
    initial, final = tuple(initial), tuple(final)
    if order not in (2, 3):
        raise ValueError("only second- and third-order processes are supported")
    freqs, gs = _select_mode_params(params, initial, modes)
    omega_q = _resonant_omega_q(initial, final, freqs)
    e_i = _bare_energy(initial, freqs, omega_q)
    theta = params.theta

    paths = []
    if order == 2:
        from_f = {s: v for s, v in _hops(final, freqs, gs, theta)}
        for mid, v1 in _hops(initial, freqs, gs, theta):
            if mid in (initial, final):
                continue
            if mid in from_f:
                paths.append(
                    TransitionPath(
                        (initial, mid, final),
                        (from_f[mid], v1),
                        (e_i - _bare_energy(mid, freqs, omega_q),),
                    )
                )
    else:
        from_f = {s: v for s, v in _hops(final, freqs, gs, theta)}
        for m1, v1 in _hops(initial, freqs, gs, theta):
            if m1 in (initial, final):
                continue
            for m2, v2 in _hops(m1, freqs, gs, theta):
                if m2 in (initial, final):
                    continue
                if m2 in from_f:
                    paths.append(
                        TransitionPath(
                            (initial, m1, m2, final),
                            (from_f[m2], v2, v1),
                            (
                                e_i - _bare_energy(m2, freqs, omega_q),
                                e_i - _bare_energy(m1, freqs, omega_q),
                            ),
                        )
                    )
    return paths


def g_eff_path_sum(initial, final, order, params, modes=None, omega_q=None):
    """Sum of path contributions V_f.. V_..i / prod(E_i - E_intermediate).

    The qubit frequency defaults to the resonance value fixed by the initial
    and final states; a different omega_q can be supplied to probe the
    divergence guard.  Raises DivergentDenominatorError when any intermediate
    is closer than 1e-6 omega_a in energy to the initial state.
    """
    initial, final = tuple(initial), tuple(final)
    freqs, gs = _select_mode_params(params, initial, modes)
    if omega_q is None:
        omega_q = _resonant_omega_q(initial, final, freqs)
    _warn_commensurate(omega_q, freqs)
    e_i = _bare_energy(initial, freqs, omega_q)

    paths = enumerate_paths(initial, final, order, params, modes=modes)
    total = 0.0
    for path in paths:
        num = 1.0
        for v in path.hop_elements:
            num *= v
        den = 1.0
        for mid in path.states[1:-1]:
            d = e_i - _bare_energy(mid, freqs, omega_q)
            if abs(d) < DENOMINATOR_GUARD:
                raise DivergentDenominatorError(
                    f"intermediate state {mid} degenerate with the initial state "
                    f"(|E_i - E_n| = {abs(d):.2e})"
                )
            den *= d
        total += num / den
    return total


def _warn_commensurate(omega_q, freqs):
    """Commensurate frequency combinations invalidate the perturbation theory
    nearby; the protocol parameters include near-commensurate values, so this
    only warns."""
    checks = [(omega_q, w) for w in freqs] + [
        (freqs[i], freqs[j]) for i in range(len(freqs)) for j in range(i + 1, len(freqs))
    ]
    for big, small in checks:
        ratio = big / small if big > small else small / big
        if abs(ratio - round(ratio)) < COMMENSURABILITY_TOL:
            warnings.warn(
                f"commensurate frequencies (ratio {ratio:.6g}); perturbation "
                "theory may be inaccurate nearby",
                stacklevel=3,
            )
            return
