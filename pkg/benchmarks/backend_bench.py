"""Compare the numba and numpy kernel backends on the circuit hot paths.

The forward pass and the adjoint gradient pass dominate every training
run, so this benchmarks exactly those, at the problem sizes the solver
actually uses.  Run:

    python benchmarks/backend_bench.py [--repeats 20]
"""

import argparse
import time

import numpy as np

from qgpe import _kernels_numpy

try:
    from qgpe import _kernels_numba
except ImportError:
    _kernels_numba = None

CASES = [
    # (n, depth): subdomain and full-domain shapes from the experiments
    (5, 20),
    (6, 50),
    (7, 100),
    (8, 200),
]


def time_backend(kernels, n, depth, repeats):
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, 2 * np.pi, 2 * n * (depth + 1))
    lam = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)

    state = kernels.ansatz_forward(n, depth, theta)   # warm-up / JIT compile
    kernels.ansatz_backward(n, depth, theta, state, lam)

    t0 = time.perf_counter()
    for _ in range(repeats):
        state = kernels.ansatz_forward(n, depth, theta)
    t_fwd = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        kernels.ansatz_backward(n, depth, theta, state, lam)
    t_bwd = (time.perf_counter() - t0) / repeats
    return t_fwd, t_bwd


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    print(f"{'case':>12} {'numpy fwd':>12} {'numpy bwd':>12}", end="")
    if _kernels_numba is not None:
        print(f" {'numba fwd':>12} {'numba bwd':>12} {'speedup':>9}")
    else:
        print("   (numba unavailable)")

    for n, depth in CASES:
        np_fwd, np_bwd = time_backend(_kernels_numpy, n, depth, args.repeats)
        row = f"n={n} d={depth:<4}".rjust(12)
        row += f" {np_fwd * 1e3:>10.2f}ms {np_bwd * 1e3:>10.2f}ms"
        if _kernels_numba is not None:
            nb_fwd, nb_bwd = time_backend(_kernels_numba, n, depth, args.repeats)
            speed = (np_fwd + np_bwd) / (nb_fwd + nb_bwd)
            row += f" {nb_fwd * 1e3:>10.2f}ms {nb_bwd * 1e3:>10.2f}ms {speed:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
