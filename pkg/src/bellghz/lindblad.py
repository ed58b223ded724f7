"""Dressed lowering operators and Lindblad master-equation evolution.

Bare collapse operators are invalid in the ultrastrong-coupling regime (they
would pump photons out of the dressed ground state), so dissipation channels
are built from energy-ordered matrix elements of the bare quadratures in the
eigenbasis of the full Hamiltonian.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import IntegrationFailureError, NumericalIntegrityError
from .hilbert import mode_annihilation, qubit_operator

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = -1e-8
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class CollapseChannel:
    """A dressed lowering operator together with its decay rate."""

    operator: np.ndarray
    rate: float

    def number_operator(self):
        """L†L; its expectation is the dressed excitation number."""
        return self.operator.conj().T @ self.operator


def dressed_lowering(decomp, bare_op):
    """Dressed lowering operator sum_{E_n > E_m} <m|(o + o†)|n> |m><n|.

    ``decomp`` is an EigenDecomposition with energy-ascending states; the
    result is returned in the computational (bare) basis.
    """
    u = decomp.states
    quad = bare_op + bare_op.conj().T
    m = u.conj().T @ quad @ u
    if np.any(np.diff(decomp.energies) < DEGENERACY_TOL):
        warnings.warn(
            "near-degenerate eigenvalues; energy ordering ties broken by index",
            stacklevel=2,
        )
    # strictly upper triangular in the energy-ascending basis: E_n > E_m only
    m = np.triu(m, k=1)
    return u @ m @ u.conj().T


def standard_channels(decomp, space, params):
    """The four channels of the master equation: modes a, b, c and the qubit."""
    channels = []
    for mode, kappa in zip("abc", params.mode_decay_rates):
        channels.append(
            CollapseChannel(dressed_lowering(decomp, mode_annihilation(space, mode)), kappa)
        )
    channels.append(
        CollapseChannel(dressed_lowering(decomp, qubit_operator(space, "sigma_minus")), params.gamma)
    )
    return channels


def dissipator(op, rho):
    """D[O] rho = (1/2)(2 O rho O† - O†O rho - rho O†O)."""
    od = op.conj().T
    odo = od @ op
    return op @ rho @ od - 0.5 * (odo @ rho + rho @ odo)


def check_density_matrix(rho, t=None, check_positivity=True):
    """Validate trace, Hermiticity, and (optionally) positivity of rho."""
    where = "" if t is None else f" at t = {t:.6g}"
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise IntegrationFailureError(f"trace drifted to {tr:.12g}{where}", t=t)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise IntegrationFailureError(f"Hermiticity violated by {herm:.3e}{where}", t=t)
    min_eig = 0.0
    if check_positivity:
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < POSITIVITY_TOL:
            raise IntegrationFailureError(
                f"negative eigenvalue {min_eig:.3e}{where}", t=t
            )
    return abs(tr - 1.0), float(herm), min_eig


def evolve(rho0, hamiltonian_fn, channels, t_grid, dt=0.01, check_positivity=True):
    """Integrate the master equation with fixed-step RK4.

    ``hamiltonian_fn`` maps a time to the (dense, complex) Hamiltonian matrix;
    ``channels`` is a sequence of CollapseChannel.  Snapshots of the density
    matrix are returned at the times in ``t_grid`` (ascending, first entry is
    the initial time).  Density-matrix invariants are checked at every
    snapshot and violations raise IntegrationFailureError.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly ascending with at least one entry")
    rho = np.array(rho0, dtype=np.complex128)
    check_density_matrix(rho, t=float(t_grid[0]), check_positivity=check_positivity)

    dim = rho.shape[0]
    ops, ops_dag, norm_ops, rates = _kernels.pack_channels(
        [c.operator for c in channels], [c.rate for c in channels], dim
    )

    snapshots = [rho.copy()]
    for t0, t1 in zip(t_grid[:-1], t_grid[1:]):
        n_steps = max(1, math.ceil((t1 - t0) / dt - 1e-12))
        h = (t1 - t0) / n_steps
        for s in range(n_steps):
            t = t0 + s * h
            h0 = np.ascontiguousarray(hamiltonian_fn(t))
            h_mid = np.ascontiguousarray(hamiltonian_fn(t + 0.5 * h))
            h1 = np.ascontiguousarray(hamiltonian_fn(t + h))
            rho = _kernels.rk4_step(rho, h0, h_mid, h1, ops, ops_dag, norm_ops, rates, h)
        check_density_matrix(rho, t=float(t1), check_positivity=check_positivity)
        snapshots.append(rho.copy())
    return snapshots


def dressed_population(rho, channel):
    """Dressed excitation number tr(rho L†L) for one channel.

    Zero on the system ground state for every dressed channel.  Small negative
    values from roundoff are clipped; values below -1e-8 raise.
    """
    val = float(np.einsum("ij,ji->", rho, channel.number_operator()).real)
    if val < POSITIVITY_TOL:
        raise NumericalIntegrityError(f"dressed population {val:.3e} < 0")
    return max(val, 0.0)
