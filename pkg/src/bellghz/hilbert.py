"""Truncated Fock ⊗ Fock ⊗ Fock ⊗ qubit product space and the bare operators on it.

Basis ordering is lexicographic in (n_a, n_b, n_c, qubit_level), with the
qubit ground state g = 0 before the excited state e = 1.  All operators are
dense complex matrices in this basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

QUBIT_G = 0
QUBIT_E = 1

MODE_INDEX = {"a": 0, "b": 1, "c": 2}


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated product space of three bosonic modes and one qubit."""

    mode_cutoffs: tuple
    total_excitation_cap: int | None
    basis: tuple
    _index: dict = field(repr=False, compare=False, hash=False, default=None)

    @property
    def dimension(self):
        return len(self.basis)

    def index_of(self, n_a, n_b, n_c, qubit_level):
        """Basis index of the bare state (n_a, n_b, n_c, q)."""
        key = (n_a, n_b, n_c, qubit_level)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"occupation {key} outside the truncated space") from None

    def occupations_of(self, index):
        return self.basis[index]

    def contains(self, occupations):
        return occupations in self._index


def build_space(mode_cutoffs, total_excitation_cap=None):
    """Build the truncated space for the given per-mode photon-number cutoffs.

    ``mode_cutoffs`` gives the maximum photon number per mode (inclusive).
    With ``total_excitation_cap`` set, only basis states with
    n_a + n_b + n_c + qubit_level <= cap are kept.
    """
    cutoffs = tuple(int(c) for c in mode_cutoffs)
    if len(cutoffs) != 3:
        raise ValueError("exactly three mode cutoffs required")
    if any(c < 1 for c in cutoffs):
        raise ValueError(f"mode cutoffs must be >= 1, got {cutoffs}")
    if total_excitation_cap is not None:
        total_excitation_cap = int(total_excitation_cap)
        if total_excitation_cap < 1:
            raise ValueError("total_excitation_cap must be >= 1")

    basis = []
    for n_a, n_b, n_c, q in product(
        range(cutoffs[0] + 1), range(cutoffs[1] + 1), range(cutoffs[2] + 1), (QUBIT_G, QUBIT_E)
    ):
        if total_excitation_cap is not None and n_a + n_b + n_c + q > total_excitation_cap:
            continue
        basis.append((n_a, n_b, n_c, q))
    basis = tuple(basis)
    index = {occ: i for i, occ in enumerate(basis)}
    return HilbertSpace(cutoffs, total_excitation_cap, basis, index)


def _mode_key(mode):
    if mode in MODE_INDEX:
        return MODE_INDEX[mode]
    if mode in (0, 1, 2):
        return mode
    raise ValueError(f"invalid mode {mode!r}, expected one of 'a', 'b', 'c'")


def mode_annihilation(space, mode):
    """Annihilation operator of one resonator mode, embedded in the full space.

    Matrix elements <.., n_j - 1, ..| a_j |.., n_j, ..> = sqrt(n_j); states
    pushed outside the truncation are dropped.
    """
    j = _mode_key(mode)
    dim = space.dimension
    op = np.zeros((dim, dim), dtype=np.complex128)
    for col, occ in enumerate(space.basis):
        n = occ[j]
        if n == 0:
            continue
        target = list(occ)
        target[j] = n - 1
        target = tuple(target)
        if space.contains(target):
            op[space.index_of(*target), col] = np.sqrt(n)
    return op


def mode_number(space, mode):
    """Photon-number operator a_j† a_j (diagonal in the bare basis)."""
    j = _mode_key(mode)
    return np.diag(np.array([occ[j] for occ in space.basis], dtype=np.complex128))


def qubit_operator(space, which):
    """Qubit operator embedded via identity on the mode factors.

    ``which`` is one of 'sigma_x', 'sigma_z', 'sigma_minus'.  Convention:
    sigma_z |e> = +|e>, sigma_z |g> = -|g>; sigma_minus |e> = |g>.
    """
    dim = space.dimension
    op = np.zeros((dim, dim), dtype=np.complex128)
    for col, occ in enumerate(space.basis):
        n_a, n_b, n_c, q = occ
        if which == "sigma_z":
            op[col, col] = 1.0 if q == QUBIT_E else -1.0
        elif which == "sigma_x":
            flipped = (n_a, n_b, n_c, 1 - q)
            op[space.index_of(*flipped), col] = 1.0
        elif which == "sigma_minus":
            if q == QUBIT_E:
                op[space.index_of(n_a, n_b, n_c, QUBIT_G), col] = 1.0
        else:
            raise ValueError(f"invalid qubit operator selector {which!r}")
    return op


def bare_state(space, n_a, n_b, n_c, qubit_level):
    """Unit basis vector of the bare state (n_a, n_b, n_c, q)."""
    if qubit_level not in (QUBIT_G, QUBIT_E):
        raise ValueError(f"qubit_level must be 0 (g) or 1 (e), got {qubit_level}")
    vec = np.zeros(space.dimension, dtype=np.complex128)
    vec[space.index_of(n_a, n_b, n_c, qubit_level)] = 1.0
    return vec
