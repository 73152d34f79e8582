#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py  [--repeat 5]

Covers the three hot paths: batched array gains, batched closed-form
rates (the GA fitness kernel) and per-sample channel statistics (the
Monte Carlo reduction).  The numba path is warmed up first so compile
time is excluded; reported numbers are the best of `repeat` runs.
"""

import argparse
import time

import numpy as np

from rismimo import _kernels
from rismimo.channel import AnglePair, Scenario
from rismimo.moments import all_element_offsets, user_gram
from rismimo.montecarlo import _sample_cascaded, substream


def make_scenario(m=64, n=16, k=4) -> Scenario:
    rng = np.random.default_rng(0)
    return Scenario(
        M=m, N=n, K=k, delta=1.0, epsilon=np.full(k, 10.0),
        beta=2.5e-9, alpha=np.full(k, 8e-8), p=np.full(k, 1000.0),
        sigma2=10**-10.4,
        ris_bs_angles=tuple(rng.uniform(0, 2 * np.pi, 4)),
        user_angles=tuple(AnglePair(*rng.uniform(0, 2 * np.pi, 2)) for _ in range(k)),
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    scn = make_scenario()
    zeta = np.ascontiguousarray(all_element_offsets(scn))
    gram = np.ascontiguousarray(user_gram(scn))
    rng = np.random.default_rng(1)
    thetas = rng.uniform(0, 2 * np.pi, size=(2000, scn.N))
    G = np.ascontiguousarray(
        _sample_cascaded(scn, thetas[0], substream(0, 0), 2000)
    )

    if not _kernels.NUMBA_ACTIVE:
        print("numba backend inactive (RISMIMO_NUMBA=0 or numba missing); "
              "benchmarking the numpy path against itself is pointless")
        return

    f_np = _kernels.gain_batch_numpy(thetas, zeta)
    f_nb = _kernels.gain_batch(thetas, zeta)  # warm-up / compile
    assert np.allclose(f_np, f_nb)

    rates_args = (f_nb, gram, scn.M, scn.N, scn.delta, scn.epsilon,
                  scn.beta * scn.alpha, scn.p, scn.sigma2)
    r_np = _kernels.rates_batch_numpy(*rates_args)
    r_nb = _kernels.rates_batch(*rates_args)
    assert np.allclose(r_np, r_nb)

    s_np = _kernels.channel_stats_numpy(G)
    s_nb = _kernels.channel_stats(G)
    assert np.allclose(s_np[0], s_nb[0]) and np.allclose(s_np[1], s_nb[1])

    rows = [
        ("gain_batch (2000 x N=16, K=4)",
         best_of(lambda: _kernels.gain_batch_numpy(thetas, zeta), args.repeat),
         best_of(lambda: _kernels.gain_batch(thetas, zeta), args.repeat)),
        ("rates_batch (2000 x K=4)",
         best_of(lambda: _kernels.rates_batch_numpy(*rates_args), args.repeat),
         best_of(lambda: _kernels.rates_batch(*rates_args), args.repeat)),
        ("channel_stats (2000 x 64x4)",
         best_of(lambda: _kernels.channel_stats_numpy(G), args.repeat),
         best_of(lambda: _kernels.channel_stats(G), args.repeat)),
    ]
    print(f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, t_np, t_nb in rows:
        print(f"{name:<34} {t_np*1e3:>8.2f}ms {t_nb*1e3:>8.2f}ms {t_np/t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
