#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths on realistic workloads:
  - tight-tolerance power iteration on small companion matrices (the
    regime of the randomized stability checks, where per-call numpy
    overhead dominates and the compiled loop wins),
  - shifted power iteration on the 400x400 companion matrix of the
    dense small-world reference graph (one big BLAS matvec per step;
    numpy is competitive here),
  - the two-lag recursion stepped 20k times on a 100-node model.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from fjmm import FJMMModel, row_stochastic, use_case_pair, watts_strogatz
from fjmm._accel import get_backend, pure
from fjmm.spectral import augmented, spectral_radius


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    try:
        compiled = get_backend("compiled")
    except ImportError:
        print("compiled kernels not built; run pip install -e . --no-build-isolation")
        return

    rng = np.random.default_rng(0)
    small = np.ascontiguousarray(rng.random((24, 24)) * 0.4)
    print("tight-tolerance power iteration, n=24, 200 calls")
    for name, backend in (("compiled", compiled), ("python", pure)):
        t = best_of(
            args.repeats,
            lambda b=backend: [
                spectral_radius(small, tol=1e-13, max_iter=3000, backend=b)
                for _ in range(200)
            ],
        )
        print(f"  {name:>8}: {t * 1e3:9.2f} ms")

    g = watts_strogatz(200, 120, 0.7, seed=11)
    W = row_stochastic(g)
    model = FJMMModel(use_case_pair("two-hop", W, 0.5), np.full(200, 0.6), np.zeros(200))
    M = augmented(model).matrix

    results = {}
    for name, backend in (("compiled", compiled), ("python", pure)):
        results[name] = spectral_radius(M, backend=backend)
    assert abs(results["compiled"] - results["python"]) < 1e-9

    print(f"\npower iteration on {M.shape[0]}x{M.shape[1]} companion matrix "
          f"(rho = {results['compiled']:.12g})")
    for name, backend in (("compiled", compiled), ("python", pure)):
        t = best_of(args.repeats, lambda b=backend: spectral_radius(M, backend=b))
        print(f"  {name:>8}: {t * 1e3:9.2f} ms")

    small = watts_strogatz(100, 10, 0.2, seed=3)
    Ws = row_stochastic(small)
    sim_model = FJMMModel(use_case_pair("memory", Ws, 0.7), np.full(100, 0.99), np.zeros(100))
    A = sim_model.scaled_lags()
    b = sim_model.anchor()
    steps = 20_000

    def run_sim(backend):
        traj = np.empty((sim_model.L + steps, 100))
        traj[: sim_model.L] = sim_model.s
        backend.simulate_lags(A, b, traj, steps, -1.0, sim_model.L)
        return traj

    np.testing.assert_allclose(run_sim(compiled), run_sim(pure), atol=1e-10)
    print(f"\ntwo-lag recursion, n=100, {steps} steps")
    for name, backend in (("compiled", compiled), ("python", pure)):
        t = best_of(args.repeats, lambda b=backend: run_sim(b))
        print(f"  {name:>8}: {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
