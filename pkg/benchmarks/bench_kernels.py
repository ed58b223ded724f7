"""Benchmark the RK4 master-equation kernel: numba vs pure numpy.

Times a fixed number of RK4 steps on a dense Lindblad problem of protocol-like
size for both kernel implementations and prints the per-step cost and speedup.

Run with:  python3 benchmarks/bench_kernels.py [--dim 45] [--steps 2000]
"""

import argparse
import time

import numpy as np

from bellghz import _kernels


def random_problem(dim, n_channels, seed=7):
    rng = np.random.default_rng(seed)

    def herm(scale=1.0):
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return scale * (m + m.conj().T) / 2.0

    h = herm()
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec /= np.linalg.norm(vec)
    rho = np.outer(vec, vec.conj())
    ops = [np.triu(herm(), k=1) for _ in range(n_channels)]
    rates = [1e-3] * n_channels
    return h, rho, _kernels.pack_channels(ops, rates, dim)


def time_kernel(step, h, rho, packed, n_steps, dt=0.005):
    ops, ops_dag, norm_ops, rates = packed
    # warm-up triggers numba compilation and page-faults the buffers
    step(rho, h, h, h, ops, ops_dag, norm_ops, rates, dt)
    t0 = time.perf_counter()
    r = rho
    for _ in range(n_steps):
        r = step(r, h, h, h, ops, ops_dag, norm_ops, rates, dt)
    elapsed = time.perf_counter() - t0
    return elapsed, r


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=45, help="density-matrix dimension")
    parser.add_argument("--channels", type=int, default=4, help="number of collapse channels")
    parser.add_argument("--steps", type=int, default=2000, help="RK4 steps per kernel")
    args = parser.parse_args()

    h, rho, packed = random_problem(args.dim, args.channels)

    t_numpy, r_numpy = time_kernel(
        _kernels.rk4_step_numpy, h, rho, packed, args.steps
    )
    print(f"numpy : {t_numpy:8.3f} s total, {1e6 * t_numpy / args.steps:8.1f} us/step")

    if not hasattr(_kernels, "rk4_step_numba"):
        print("numba : unavailable (not installed or BELLGHZ_NO_NUMBA set)")
        return
    t_numba, r_numba = time_kernel(
        _kernels.rk4_step_numba, h, rho, packed, args.steps
    )
    print(f"numba : {t_numba:8.3f} s total, {1e6 * t_numba / args.steps:8.1f} us/step")
    print(f"speedup: {t_numpy / t_numba:.2f}x")
    print(f"max |numpy - numba| after {args.steps} steps: {np.max(np.abs(r_numpy - r_numba)):.3e}")


if __name__ == "__main__":
    main()
