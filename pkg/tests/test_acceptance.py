"""Acceptance gate: every criterion below runs standalone at desk scale
and prints one PASS/FAIL line.  Tolerances are fixed here, not tuned.

Run with:  pytest tests/test_acceptance.py -v -s
"""

import math
import time

import numpy as np
import pytest

import rismimo as rm
from rismimo.channel import AnglePair, Scenario, with_updates
from rismimo.experiments import _desk_ga, paper_scenario, scenario_from_geometry
from rismimo.ga import GAConfig, fitness_scale, ga_optimize, sus_select
from rismimo.moments import (
    aligned_phases,
    array_gain,
    element_offsets,
    interference_moment,
    noise_moment,
    random_phases,
    signal_moment,
)
from rismimo.montecarlo import (
    mc_condition_number,
    mc_ergodic_rate,
    mc_moments,
    mc_random_phase_moment_rate,
    substream,
)
from rismimo.rates import (
    aligned_power_limit,
    closed_form_rates,
    discrete_alignment_bound,
    nlos_power_scaling_limit,
    pure_los_rate,
    random_phase_rate_limit,
    rayleigh_rate,
    ula_inner_product_sq,
)

TWO_PI = 2 * np.pi


def _report(name: str, ok: bool, detail: str, t0: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}: {detail} ({time.perf_counter() - t0:.1f}s)")
    assert ok, f"{name}: {detail}"


def test_channel_moment_oracle_agreement():
    """Closed-form moments match a 1e5-sample Monte Carlo within 4 SE."""
    t0 = time.perf_counter()
    scn = paper_scenario(seed=1)
    worst = 0.0
    for j, phase_seed in enumerate((11, 12)):
        pv = random_phases(scn.N, substream(phase_seed, 0))
        emp = mc_moments(scn, pv, 100_000, seed=20 + j)
        for k in range(scn.K):
            worst = max(
                worst,
                abs(noise_moment(scn, pv, k) - emp.noise[k].mean) / emp.noise[k].std_error,
                abs(signal_moment(scn, pv, k) - emp.signal[k].mean) / emp.signal[k].std_error,
            )
            for i in range(scn.K):
                if i != k:
                    est = emp.interference[(k, i)]
                    worst = max(
                        worst, abs(interference_moment(scn, pv, k, i) - est.mean) / est.std_error
                    )
    _report("channel-moment-oracle-agreement", worst < 4.0, f"worst |z| = {worst:.2f} (< 4)", t0)


def test_closed_form_rate_tightness():
    """Closed-form per-user rates within 5% of 1e4-sample Monte Carlo for
    random, aligned (each user under its own alignment) and GA phases."""
    t0 = time.perf_counter()
    scn = paper_scenario(seed=1)
    worst = 0.0

    pv = random_phases(scn.N, substream(3, 0))
    cf = closed_form_rates(scn, pv).per_user
    mc = np.array([e.mean for e in mc_ergodic_rate(scn, pv, 10_000, seed=7)])
    worst = max(worst, float(np.max(np.abs(cf - mc) / mc)))

    for k in range(scn.K):
        pv = aligned_phases(scn, k)
        cf_k = closed_form_rates(scn, pv).per_user[k]
        mc_k = mc_ergodic_rate(scn, pv, 10_000, seed=7)[k].mean
        worst = max(worst, abs(cf_k - mc_k) / mc_k)

    for seed, objective in ((3, "sum"), (3, "min")):
        cfg = GAConfig(
            population=80, elites=4, crossover_pairs=60, mutation_parents=16,
            max_generations=150, stall_window=15, objective=objective,
        )
        pv = ga_optimize(scn, cfg, seed=seed).best.phases
        cf = closed_form_rates(scn, pv).per_user
        mc = np.array([e.mean for e in mc_ergodic_rate(scn, pv, 10_000, seed=7)])
        worst = max(worst, float(np.max(np.abs(cf - mc) / mc)))

    _report("closed-form-rate-tightness", worst < 0.05, f"worst rel gap = {worst*100:.2f}% (< 5%)", t0)


def test_special_case_exactness():
    """Rayleigh formula equals the general closed form exactly at zero
    Rician factors; deterministic-channel Monte Carlo equals the pure-LoS
    formula."""
    t0 = time.perf_counter()
    scn = paper_scenario(seed=1)
    nlos = with_updates(scn, delta=0.0, epsilon=np.zeros(scn.K))
    pv = random_phases(scn.N, substream(5, 0))
    a = closed_form_rates(nlos, pv).per_user
    b = rayleigh_rate(nlos)
    ok1 = np.allclose(a, b, rtol=1e-12, atol=0)

    los = with_updates(scn, pure_los=True)
    ests = mc_ergodic_rate(los, pv, 200, seed=1)
    cf = pure_los_rate(los, pv)
    ok2 = all(e.std_error == 0.0 for e in ests) and np.allclose(
        [e.mean for e in ests], cf, rtol=1e-12
    )
    _report(
        "special-case-exactness",
        ok1 and ok2,
        f"rayleigh max diff {np.abs(a-b).max():.2e}; pure-LoS deterministic match {ok2}",
        t0,
    )


def test_power_scaling_convergence():
    """Rate with per-user power eu/M converges to the pure-NLoS ceiling."""
    t0 = time.perf_counter()
    base, _ = scenario_from_geometry(count=4, seed=3)
    base = with_updates(base, delta=0.0, epsilon=np.zeros(4))
    eu = 100.0
    lim = nlos_power_scaling_limit(base, eu)
    pv = random_phases(base.N, substream(6, 0))
    scn = with_updates(base, M=4096, p=np.full(4, eu / 4096))
    gap = float(np.abs(closed_form_rates(scn, pv).per_user - lim).max())
    _report("power-scaling-convergence", gap < 0.01, f"gap at M=4096: {gap:.2e} bits (< 0.01)", t0)


def test_random_phase_limit():
    """Moment-averaged Monte Carlo under random phases lands within 0.1 bit
    of the asymptotic ceiling at M = N = 256, continuous and 2-bit alike."""
    t0 = time.perf_counter()
    scn, _ = scenario_from_geometry(count=4, seed=3, M=256, N=256)
    lim = random_phase_rate_limit(scn)
    gaps = []
    for bits in (None, 2):
        ests = mc_random_phase_moment_rate(scn, samples=2000, seed=9, bits=bits)
        gaps.append(float(np.max(np.abs(np.array([e.mean for e in ests]) - lim))))
    ok = all(g < 0.1 for g in gaps)
    _report(
        "random-phase-limit",
        ok,
        f"max gaps: continuous {gaps[0]:.3f}, 2-bit {gaps[1]:.3f} bits (< 0.1)",
        t0,
    )


def test_aligned_phase_scaling():
    """With the favored user's power cut as eu/(M N^2) the rate approaches
    the aligned-phase ceiling monotonically; final gap below 5%."""
    t0 = time.perf_counter()
    base, _ = scenario_from_geometry(count=4, seed=3)
    eu = 1e4
    lim = aligned_power_limit(base, 0, eu)
    gaps = []
    for m, n in ((16, 4), (256, 16), (4096, 64)):
        scn = with_updates(base, M=m, N=n)
        p = np.full(4, eu / (m * n))
        p[0] = eu / (m * n * n)
        scn = with_updates(scn, p=p)
        r = closed_form_rates(scn, aligned_phases(scn, 0)).per_user[0]
        gaps.append(abs(r - lim) / lim)
    ok = gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.05
    _report(
        "aligned-phase-scaling",
        ok,
        "gaps " + " -> ".join(f"{g*100:.2f}%" for g in gaps) + " (monotone, final < 5%)",
        t0,
    )


def test_random_gain_moments():
    """Sample moments of the array gain under random phases: mean squared
    modulus N and mean fourth power 2N^2 - N, continuous and 3-bit."""
    t0 = time.perf_counter()
    n = 16
    scn = paper_scenario(seed=1)
    zeta = element_offsets(scn, 0)
    worst = 0.0
    for bits in (None, 3):
        rng = substream(13, 0 if bits is None else 1)
        if bits is None:
            thetas = rng.uniform(0, TWO_PI, size=(100_000, n))
        else:
            thetas = rng.integers(0, 2**bits, size=(100_000, n)) * (TWO_PI / 2**bits)
        f = np.exp(1j * (zeta + thetas)).sum(axis=1)
        f2 = np.abs(f) ** 2
        f4 = f2**2
        z2 = abs(f2.mean() - n) / (f2.std(ddof=1) / math.sqrt(f2.size))
        z4 = abs(f4.mean() - (2 * n**2 - n)) / (f4.std(ddof=1) / math.sqrt(f4.size))
        worst = max(worst, z2, z4)
    _report("random-gain-moments", worst < 3.0, f"worst |z| = {worst:.2f} (< 3)", t0)


def test_quantized_alignment_floor():
    """Aligned-then-quantized phases never drop the squared gain below
    N^2 cos^2(pi/2^b): zero violations over 1000 random geometries."""
    t0 = time.perf_counter()
    rng = substream(14, 0)
    violations = 0
    for _ in range(1000):
        angles = rng.uniform(0, TWO_PI, size=6)
        for n in (4, 16, 64):
            scn = Scenario(
                M=4, N=n, K=1, delta=1.0, epsilon=np.ones(1), beta=1.0,
                alpha=np.ones(1), p=np.ones(1), sigma2=1.0,
                ris_bs_angles=tuple(angles[:4]),
                user_angles=(AnglePair(angles[4], angles[5]),),
            )
            for b in (2, 3, 4):
                f2 = abs(array_gain(aligned_phases(scn, 0, bits=b), scn, 0)) ** 2
                if f2 < discrete_alignment_bound(n, b) - 1e-9:
                    violations += 1
    _report("quantized-alignment-floor", violations == 0, f"{violations} violations", t0)


def test_ga_sanity():
    """Single-user alignment recovery, flat-fitness stall, and a >= 10%
    sum-rate margin over the random-phase average across 5 seeds."""
    t0 = time.perf_counter()
    base = paper_scenario(seed=2)
    single = with_updates(
        base, K=1, epsilon=base.epsilon[:1], alpha=base.alpha[:1], p=base.p[:1],
        user_angles=base.user_angles[:1],
    )
    res = ga_optimize(single, GAConfig(), seed=0)
    f1 = abs(array_gain(res.best.phases, single, 0))
    ok1 = f1 >= 0.99 * single.N

    flat = ga_optimize(with_updates(base, delta=0.0), GAConfig(), seed=1)
    ok2 = flat.stopped_by == "stall" and np.ptp(flat.history["best"]) == 0.0

    scn = paper_scenario(seed=1)
    rng = substream(15, 0)
    rand_mean = float(
        np.mean([closed_form_rates(scn, random_phases(scn.N, rng)).sum_rate for _ in range(200)])
    )
    ratios = []
    for seed in range(5):
        best = ga_optimize(scn, GAConfig(), seed=seed).best.raw_fitness
        ratios.append(best / rand_mean)
    ok3 = all(r >= 1.1 for r in ratios)
    _report(
        "ga-sanity",
        ok1 and ok2 and ok3,
        f"|f1|/N = {f1/single.N:.4f}; stall at gen {flat.generations}; "
        f"min GA/random ratio = {min(ratios):.2f} (>= 1.1)",
        t0,
    )


def test_ga_mechanics():
    """Fitness scaling sums to 2*Nc exactly, SUS frequencies track slot
    sizes within 2%, and the population never changes size."""
    t0 = time.perf_counter()
    rng = substream(16, 0)
    raw = rng.uniform(0, 5, 200)
    scaled = fitness_scale(raw, crossover_pairs=152)
    ok1 = abs(scaled.sum() - 304.0) < 1e-9

    scaled5 = fitness_scale(np.array([4.0, 3.0, 2.0, 1.0, 0.5]), crossover_pairs=4)
    slots = scaled5 / scaled5.sum()
    counts = np.zeros(5)
    for _ in range(1000):
        counts += np.bincount(sus_select(scaled5, 8, rng), minlength=5)
    freq = counts / counts.sum()
    ok2 = bool(np.all(np.abs(freq - slots) / slots < 0.02))

    res = ga_optimize(paper_scenario(seed=1), _desk_ga(), seed=0)
    ok3 = bool(np.all(res.history["population_size"] == _desk_ga().population))
    _report(
        "ga-mechanics",
        ok1 and ok2 and ok3,
        f"sum(scaled) - 2Nc = {scaled.sum()-304:.1e}; max slot error "
        f"{float(np.max(np.abs(freq-slots)/slots))*100:.2f}%; population constant {ok3}",
        t0,
    )


def test_condition_number_trend():
    """Optimized phases condition the cascaded channel better than random
    ones, and more elements help."""
    t0 = time.perf_counter()
    base = paper_scenario(seed=1)
    cfg = GAConfig(
        population=80, elites=4, crossover_pairs=60, mutation_parents=16,
        max_generations=150, stall_window=15, objective="min",
    )
    means = {}
    for n in (16, 64):
        scn = with_updates(base, N=n)
        opt = ga_optimize(scn, cfg, seed=2).best.phases
        means[("opt", n)] = mc_condition_number(scn, opt, 400, seed=3).mean
        means[("rand", n)] = mc_condition_number(
            scn, random_phases(n, substream(4, 0)), 400, seed=3
        ).mean
    ok = (
        means[("opt", 64)] < means[("rand", 64)]
        and means[("opt", 64)] < means[("opt", 16)]
        and means[("rand", 64)] < means[("rand", 16)]
    )
    _report(
        "condition-number-trend",
        ok,
        f"opt {means[('opt',16)]:.2f}->{means[('opt',64)]:.2f}, "
        f"random {means[('rand',16)]:.2f}->{means[('rand',64)]:.2f}",
        t0,
    )


def test_non_ris_los_baseline():
    """Linear-array interference share vanishes with antenna count; the
    coincident-angle branch returns exactly M^2."""
    t0 = time.perf_counter()
    share16 = ula_inner_product_sq(16, 0.5, 0.3) / 16
    share4096 = ula_inner_product_sq(4096, 0.5, 0.3) / 4096
    ok1 = share4096 < 1e-2 * share16
    ok2 = all(ula_inner_product_sq(m, 0.5, 0.0) == float(m) ** 2 for m in (1, 16, 4096))
    _report(
        "non-ris-los-baseline",
        ok1 and ok2,
        f"share ratio {share4096/share16:.2e} (< 1e-2); zero-angle branch exact {ok2}",
        t0,
    )
