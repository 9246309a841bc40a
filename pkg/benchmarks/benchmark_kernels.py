#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths behind structure-matrix assembly:
  * phase_exponents: batched composition-phase exponents for code arrays
  * assemble: (1+tau)x(1+tau) structure-matrix fill for a closed term set

Usage:
    python3 benchmarks/benchmark_kernels.py [--repeats N]

Both implementations are imported directly, so the PAULIEXP_BACKEND
environment variable does not affect this script. The numba timings
exclude JIT compilation (a warmup call is made first). Outputs agree
bit-for-bit; the script asserts that before timing.
"""

import argparse
import sys
import time

import numpy as np

from pauliexp import close_codes
from pauliexp._kernels import (
    HAS_NUMBA,
    assemble_numba,
    assemble_numpy,
    phase_exponents_numba,
    phase_exponents_numpy,
)

PHASE_BATCHES = (10_000, 100_000, 1_000_000)
ASSEMBLE_RANKS = (4, 6, 8, 10)  # tau = 15, 63, 255, 1023
ASSEMBLE_N = 16


def best_of(fn, repeats: int) -> float:
    fn()  # warmup: JIT compile / page in
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def closed_inputs(rng, rank: int):
    while True:
        gens = rng.integers(1, 4**ASSEMBLE_N, size=rank, dtype=np.uint64)
        ts = close_codes(ASSEMBLE_N, gens, cap=4 * 2**rank)
        if len(ts) == 2**rank - 1:
            break
    coeffs = rng.uniform(-1.0, 1.0, size=len(ts))
    return ts.codes, coeffs


def fmt_row(label: str, size: int, t_np: float, t_nb: float) -> str:
    return (f"{label:<16} {size:>9} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f}"
            f" {t_np / t_nb:>9.2f}x")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = ap.parse_args()

    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(42)
    header = f"{'kernel':<16} {'size':>9} {'numpy ms':>12} {'numba ms':>12} {'speedup':>10}"
    print(header)
    print("-" * len(header))

    for batch in PHASE_BATCHES:
        a = rng.integers(0, 2**64, size=batch, dtype=np.uint64)
        b = rng.integers(0, 2**64, size=batch, dtype=np.uint64)
        assert np.array_equal(phase_exponents_numpy(a, b), phase_exponents_numba(a, b))
        t_np = best_of(lambda: phase_exponents_numpy(a, b), args.repeats)
        t_nb = best_of(lambda: phase_exponents_numba(a, b), args.repeats)
        print(fmt_row("phase_exponents", batch, t_np, t_nb))

    for rank in ASSEMBLE_RANKS:
        codes, coeffs = closed_inputs(rng, rank)
        m_np, k_np, l_np = assemble_numpy(codes, coeffs)
        m_nb, k_nb, l_nb = assemble_numba(codes, coeffs)
        assert (k_np, l_np) == (k_nb, l_nb) == (-1, -1)
        assert np.array_equal(m_np, m_nb)
        t_np = best_of(lambda: assemble_numpy(codes, coeffs), args.repeats)
        t_nb = best_of(lambda: assemble_numba(codes, coeffs), args.repeats)
        print(fmt_row("assemble", len(codes), t_np, t_nb))

    return 0


if __name__ == "__main__":
    sys.exit(main())
