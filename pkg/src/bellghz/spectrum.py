"""Diagonalization, level identification, energy-level scans, and
avoided-crossing extraction (numeric effective couplings)."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .errors import AmbiguousLevelError, SearchFailureError
from .hamiltonian import build_hamiltonian
from .hilbert import bare_state

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Energy-ascending eigenvalues and eigenvectors (columns of ``states``)."""

    energies: np.ndarray
    states: np.ndarray


@dataclass(frozen=True)
class CrossingInfo:
    """Location and size of a minimum level splitting versus omega_q."""

    omega_q_star: float
    min_splitting: float
    g_eff_numeric: float
    level_indices: tuple


def _canonicalize_phases(states):
    """Rotate each eigenvector so its largest-magnitude entry is real positive.

    Makes eigenvector phases deterministic across LAPACK implementations.
    """
    idx = np.argmax(np.abs(states), axis=0)
    pivots = states[idx, np.arange(states.shape[1])]
    phases = pivots / np.abs(pivots)
    return states / phases[np.newaxis, :]


def diagonalize(h):
    """Full Hermitian eigendecomposition with deterministic eigenvector phases."""
    h = np.asarray(h)
    if np.max(np.abs(h - h.conj().T)) > HERMITICITY_TOL * max(1.0, np.max(np.abs(h))):
        raise ValueError("matrix is not Hermitian")
    energies, states = np.linalg.eigh(h)
    return EigenDecomposition(energies, _canonicalize_phases(states))


def identify_level(decomp, bare_target):
    """Index of the eigenstate with the largest overlap with a bare state.

    Returns (index, squared overlap).  Raises AmbiguousLevelError when the
    best squared overlap is below 0.5 (state too strongly dressed, e.g. at an
    avoided crossing).
    """
    overlaps = np.abs(decomp.states.conj().T @ bare_target) ** 2
    idx = int(np.argmax(overlaps))
    best = float(overlaps[idx])
    if best < 0.5:
        raise AmbiguousLevelError(
            f"no eigenstate has majority overlap with the bare target (best {best:.3f})"
        )
    return idx, best


def project_onto_levels(decomp, indices, bare_target):
    """Normalized projection of a bare vector onto the span of selected eigenstates.

    Used where a single dressed level cannot be identified, e.g. for the
    qubit-excited state exactly at an avoided crossing.  Returns
    (vector, squared norm of the projection before normalization).
    """
    sub = decomp.states[:, list(indices)]
    coeffs = sub.conj().T @ bare_target
    weight = float(np.sum(np.abs(coeffs) ** 2))
    if weight < 0.5:
        raise AmbiguousLevelError(
            f"selected levels carry only {weight:.3f} of the bare state"
        )
    vec = sub @ coeffs
    return vec / np.linalg.norm(vec), weight


def scan_levels(space, params, omega_q_grid, num_levels=12):
    """Lowest ``num_levels`` energies per omega_q grid point.

    Returns an array of shape (len(grid), num_levels).
    """
    omega_q_grid = np.asarray(omega_q_grid, dtype=float)
    if np.any(np.diff(omega_q_grid) < 0):
        raise ValueError("omega_q_grid must be sorted ascending")
    out = np.empty((omega_q_grid.size, num_levels))
    for i, wq in enumerate(omega_q_grid):
        h = build_hamiltonian(space, params, omega_q=wq)
        out[i] = np.linalg.eigvalsh(h)[:num_levels]
    return out


def _tracked_gap(space, params, omega_q, bare_vecs):
    """Gap between the two eigenlevels carrying the most weight of a bare pair.

    Tracking by state overlap rather than energy order keeps the same pair of
    levels selected on both sides of the crossing.
    """
    decomp = diagonalize(build_hamiltonian(space, params, omega_q=omega_q))
    proj = np.zeros(decomp.energies.size)
    for vec in bare_vecs:
        proj += np.abs(decomp.states.conj().T @ vec) ** 2
    top2 = np.argsort(proj)[-2:]
    i, j = int(top2[0]), int(top2[1])
    return abs(decomp.energies[i] - decomp.energies[j]), tuple(sorted((i, j)))


def find_avoided_crossing(
    space,
    params,
    omega_q_guess,
    window,
    bare_pair,
    coarse_points=41,
    rel_tol=1e-8,
):
    """Locate the minimum splitting of the avoided crossing near omega_q_guess.

    ``window`` is the half-width of the search interval and ``bare_pair`` the
    two crossing bare states as occupation tuples (n_a, n_b, n_c, q).  The gap
    is minimized by golden-section search; g_eff_numeric is half the minimum
    splitting.
    """
    bare_vecs = [bare_state(space, *occ) for occ in bare_pair]
    lo, hi = omega_q_guess - window, omega_q_guess + window

    grid = np.linspace(lo, hi, coarse_points)
    gaps = np.array([_tracked_gap(space, params, wq, bare_vecs)[0] for wq in grid])

    imin = int(np.argmin(gaps))
    if imin == 0 or imin == coarse_points - 1:
        raise SearchFailureError(
            f"gap minimum at window edge (omega_q = {grid[imin]:.6f}); "
            "window does not bracket the crossing"
        )
    local_minima = [
        i
        for i in range(1, coarse_points - 1)
        if gaps[i] < gaps[i - 1] and gaps[i] < gaps[i + 1]
    ]
    span = gaps.max() - gaps.min()
    significant = [i for i in local_minima if gaps[i] < gaps.min() + 0.5 * span]
    if len(significant) > 1:
        raise SearchFailureError("gap is not unimodal inside the search window")

    # golden-section refinement on the bracketing interval
    a, b = grid[imin - 1], grid[imin + 1]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = _tracked_gap(space, params, x1, bare_vecs)[0]
    f2 = _tracked_gap(space, params, x2, bare_vecs)[0]
    while (b - a) > rel_tol * max(1.0, abs(omega_q_guess)):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = _tracked_gap(space, params, x1, bare_vecs)[0]
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = _tracked_gap(space, params, x2, bare_vecs)[0]

    omega_q_star = 0.5 * (a + b)
    gap, levels = _tracked_gap(space, params, omega_q_star, bare_vecs)
    return CrossingInfo(float(omega_q_star), float(gap), float(gap) / 2.0, levels)


def with_omega_q(params, omega_q):
    """Copy of params with the qubit frequency replaced."""
    return dc_replace(params, omega_q=omega_q)
