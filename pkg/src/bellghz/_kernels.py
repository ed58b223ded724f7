"""Hot numeric kernels for master-equation time stepping.

The RK4 step is compiled with numba when available; setting the environment
variable BELLGHZ_NO_NUMBA=1 (or any nonzero value) selects the pure-numpy
implementation instead.  Both paths share the same source.
"""

from __future__ import annotations

import os

import numpy as np


def _lindblad_rhs(h, rho, ops, ops_dag, norm_ops, rates):
    """d(rho)/dt = -i[H, rho] + sum_k r_k (L rho L† - {L†L, rho}/2).

    ``ops``/``ops_dag``/``norm_ops`` are stacked (k, n, n) arrays of the
    collapse operators, their adjoints, and the precomputed L†L products.
    """
    out = -1j * (h @ rho - rho @ h)
    for k in range(ops.shape[0]):
        out = out + rates[k] * (
            ops[k] @ rho @ ops_dag[k] - 0.5 * (norm_ops[k] @ rho + rho @ norm_ops[k])
        )
    return out


def _make_rk4_step(rhs):
    def rk4_step(rho, h0, h_mid, h1, ops, ops_dag, norm_ops, rates, dt):
        """One fixed-step RK4 update of the density matrix."""
        k1 = rhs(h0, rho, ops, ops_dag, norm_ops, rates)
        k2 = rhs(h_mid, rho + (0.5 * dt) * k1, ops, ops_dag, norm_ops, rates)
        k3 = rhs(h_mid, rho + (0.5 * dt) * k2, ops, ops_dag, norm_ops, rates)
        k4 = rhs(h1, rho + dt * k3, ops, ops_dag, norm_ops, rates)
        return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return rk4_step


lindblad_rhs_numpy = _lindblad_rhs
rk4_step_numpy = _make_rk4_step(_lindblad_rhs)

_disabled = os.environ.get("BELLGHZ_NO_NUMBA", "0") not in ("", "0")
USING_NUMBA = False
lindblad_rhs = lindblad_rhs_numpy
rk4_step = rk4_step_numpy

if not _disabled:
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        lindblad_rhs_numba = njit(nogil=True)(_lindblad_rhs)
        rk4_step_numba = njit(nogil=True)(_make_rk4_step(lindblad_rhs_numba))
        lindblad_rhs = lindblad_rhs_numba
        rk4_step = rk4_step_numba
        USING_NUMBA = True


def pack_channels(operators, rates, dim):
    """Stack collapse operators into contiguous arrays for the kernels.

    Channels with zero rate contribute nothing and are dropped up front.
    """
    kept = [(op, r) for op, r in zip(operators, rates) if r != 0.0]
    operators = [op for op, _ in kept]
    rates = [r for _, r in kept]
    k = len(operators)
    ops = np.zeros((k, dim, dim), dtype=np.complex128)
    for i, op in enumerate(operators):
        ops[i] = op
    ops_dag = np.ascontiguousarray(ops.conj().transpose(0, 2, 1))
    norm_ops = np.ascontiguousarray(ops_dag @ ops)
    return ops, ops_dag, norm_ops, np.asarray(rates, dtype=np.float64)
