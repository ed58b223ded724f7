import numpy as np
import pytest

from bellghz import _kernels


def _problem(dim=8, n_channels=2, seed=3):
    rng = np.random.default_rng(seed)

    def herm():
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return (m + m.conj().T) / 2.0

    h = herm()
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec /= np.linalg.norm(vec)
    rho = np.outer(vec, vec.conj())
    ops = [np.triu(herm(), k=1) for _ in range(n_channels)]
    rates = [0.01 * (i + 1) for i in range(n_channels)]
    return h, rho, ops, rates


def test_rhs_matches_reference():
    h, rho, ops, rates = _problem()
    packed = _kernels.pack_channels(ops, rates, rho.shape[0])
    out = _kernels.lindblad_rhs_numpy(h, rho, *packed)
    ref = -1j * (h @ rho - rho @ h)
    for op, r in zip(ops, rates):
        od = op.conj().T
        ref += r * (op @ rho @ od - 0.5 * (od @ op @ rho + rho @ od @ op))
    assert np.allclose(out, ref, atol=1e-14)


def test_rk4_step_matches_scalar_exponential():
    # a 1x1 "density matrix" with H = 0 and L = 0 reduces RK4 to identity;
    # use instead a two-level decay problem with known rate
    dim = 2
    h = np.zeros((dim, dim), dtype=complex)
    op = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    packed = _kernels.pack_channels([op], [0.2], dim)
    rho = np.diag([0.0, 1.0]).astype(complex)
    dt = 0.01
    for _ in range(100):
        rho = _kernels.rk4_step_numpy(rho, h, h, h, *packed, dt)
    assert rho[1, 1].real == pytest.approx(np.exp(-0.2 * 1.0), abs=1e-10)
    assert abs(np.trace(rho) - 1.0) < 1e-12


def test_pack_channels_drops_zero_rates():
    _, _, ops, _ = _problem(n_channels=3)
    packed = _kernels.pack_channels(ops, [0.0, 0.5, 0.0], ops[0].shape[0])
    assert packed[0].shape[0] == 1
    assert np.allclose(packed[0][0], ops[1])
    assert packed[3].tolist() == [0.5]


@pytest.mark.skipif(not _kernels.USING_NUMBA, reason="numba path not active")
def test_numba_and_numpy_paths_agree():
    h, rho, ops, rates = _problem(dim=12, n_channels=3)
    packed = _kernels.pack_channels(ops, rates, rho.shape[0])
    r_np = rho
    r_nb = rho
    for _ in range(50):
        r_np = _kernels.rk4_step_numpy(r_np, h, h, h, *packed, 0.01)
        r_nb = _kernels.rk4_step_numba(r_nb, h, h, h, *packed, 0.01)
    assert np.allclose(r_np, r_nb, atol=1e-13)
