"""Benchmark the compiled leapfrog kernel against the pure-Python twin.

Usage: python benchmarks/bench_kernels.py [--steps N]

Reports raw kernel throughput per potential family, then an end-to-end
orbit-location timing through each backend. Results confirm both backends
agree to the last bits on the same trajectory.
"""

import argparse
import time

import numpy as np

from matrixmech import HamiltonianSystem, find_orbit
from matrixmech import _kernels

CASES = [
    ("harmonic", _kernels.HARMONIC, [1.0], 1.0, 1.0, 0.0),
    ("quartic", _kernels.QUARTIC, [0.25], 1.0, 1.4, 0.0),
    ("pendulum", _kernels.PENDULUM, [1.0, 1.0], 1.0, 0.9, 0.0),
    ("poly(4)", _kernels.POLYNOMIAL, [0.0, 0.0, 0.5, 0.1, 0.05], 1.0, 0.5, 0.0),
]


def time_kernel(backend, family, params, mass, q0, p0, steps):
    start = time.perf_counter()
    q, p = _kernels.leapfrog(family, params, mass, q0, p0, 1e-3, steps, steps, backend=backend)
    elapsed = time.perf_counter() - start
    return elapsed, (q[-1], p[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2_000_000,
                        help="integration steps per kernel timing (default: %(default)s)")
    args = parser.parse_args()

    backends = _kernels.available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("note: compiled extension not built; timing the pure backend only")

    print(f"\nraw kernel, {args.steps:,} steps each:")
    print(f"{'family':<10} " + " ".join(f"{b + ' (Msteps/s)':>22}" for b in backends)
          + ("      speedup" if len(backends) > 1 else ""))
    for name, family, params, mass, q0, p0 in CASES:
        rates = {}
        finals = {}
        for backend in backends:
            steps = args.steps if backend == "compiled" else max(args.steps // 20, 10_000)
            elapsed, final = time_kernel(backend, family, params, mass, q0, p0, steps)
            rates[backend] = steps / elapsed / 1e6
            finals[backend] = final
        row = f"{name:<10} " + " ".join(f"{rates[b]:>22.2f}" for b in backends)
        if len(backends) > 1:
            row += f"{rates['compiled'] / rates['pure']:>11.0f}x"
        print(row)

    if len(backends) > 1:
        q_fast, p_fast = _kernels.leapfrog(
            _kernels.QUARTIC, [0.25], 1.0, 1.4, 0.0, 1e-3, 50_000, 1, backend="compiled")
        q_slow, p_slow = _kernels.leapfrog(
            _kernels.QUARTIC, [0.25], 1.0, 1.4, 0.0, 1e-3, 50_000, 1, backend="pure")
        print(f"\nbackend agreement over 50k steps: max |dq| = "
              f"{np.max(np.abs(q_fast - q_slow)):.3e}, max |dp| = "
              f"{np.max(np.abs(p_fast - p_slow)):.3e}")

    print("\nend-to-end find_orbit (quartic lambda=0.25, E=1):")
    system = HamiltonianSystem.quartic(0.25)
    original = _kernels.backend_name()
    try:
        for backend in backends:
            _kernels.select_backend(backend)
            start = time.perf_counter()
            orbit = find_orbit(system, 1.0)
            elapsed = time.perf_counter() - start
            print(f"  {backend:<9} {elapsed * 1e3:9.1f} ms   (T = {orbit.period:.12f})")
    finally:
        _kernels.select_backend(original)


if __name__ == "__main__":
    main()
