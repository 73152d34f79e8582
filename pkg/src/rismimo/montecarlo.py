"""Brute-force Monte Carlo estimators used as the independent oracle.

Every estimator draws fresh Rician channel realizations, evaluates the
quantity of interest per sample and reports mean and standard error.
Sampling is organized in fixed-size chunks; each chunk owns a substream
derived from the root seed with a counter-based split, so estimates are
reproducible bit for bit for a given seed and would not change if chunks
were evaluated in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import Scenario, complex_normal, los_components
from .moments import PhaseVector, random_phases


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for task ``key`` under a root seed (counter-based split)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def _chunk_size(scenario: Scenario) -> int:
    # keep the largest per-chunk array near 64 MB of complex128
    per_sample = scenario.M * scenario.N + scenario.N * scenario.K + scenario.M * scenario.K
    return max(16, int(4_000_000 // max(per_sample, 1)))


def _sample_cascaded(
    scenario: Scenario, theta: np.ndarray, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Draw ``size`` cascaded channel matrices, shape (size, M, K)."""
    hbar, H2bar = los_components(scenario)
    phase = np.exp(1j * theta)
    if scenario.pure_los:
        H1 = np.sqrt(scenario.alpha) * hbar
        G = (np.sqrt(scenario.beta) * H2bar * phase) @ H1
        return np.broadcast_to(G, (size, *G.shape))
    d = scenario.delta
    eps = scenario.epsilon
    Ht2 = complex_normal(rng, (size, scenario.M, scenario.N))
    ht = complex_normal(rng, (size, scenario.N, scenario.K))
    H2 = np.sqrt(scenario.beta) * (
        np.sqrt(d / (d + 1.0)) * H2bar + np.sqrt(1.0 / (d + 1.0)) * Ht2
    )
    H1 = np.sqrt(scenario.alpha) * (
        np.sqrt(eps / (eps + 1.0)) * hbar + np.sqrt(1.0 / (eps + 1.0)) * ht
    )
    return (H2 * phase[None, None, :]) @ H1


def _ergodic_rate_samples(
    scenario: Scenario, theta: np.ndarray, samples: int, seed: int, key: tuple[int, ...] = ()
) -> np.ndarray:
    """Per-sample per-user instantaneous rates, shape (samples, K)."""
    p = scenario.p
    out = np.empty((samples, scenario.K))
    chunk = _chunk_size(scenario)
    pos = 0
    for ci, start in enumerate(range(0, samples, chunk)):
        size = min(chunk, samples - start)
        G = _sample_cascaded(scenario, theta, substream(seed, *key, ci), size)
        n2, x2 = _kernels.channel_stats(np.ascontiguousarray(G))
        inter = x2 @ p - np.einsum("skk->sk", x2) * p  # drop the k = i term
        sinr = p * n2**2 / (inter + scenario.sigma2 * n2)
        out[pos : pos + size] = np.log2(1.0 + sinr)
        pos += size
    return out


def _estimates_from_samples(values: np.ndarray) -> list[McEstimate]:
    s = values.shape[0]
    means = values.mean(axis=0)
    if s > 1:
        ses = values.std(axis=0, ddof=1) / math.sqrt(s)
        # identical samples (deterministic channels) are exactly zero-variance;
        # don't let summation rounding report a one-ulp spread
        ses = np.where(np.ptp(values, axis=0) == 0.0, 0.0, ses)
        means = np.where(np.ptp(values, axis=0) == 0.0, values[0], means)
    else:
        ses = np.zeros_like(means)
    return [McEstimate(float(m), float(se), s) for m, se in zip(means, ses)]


def mc_ergodic_rate(
    scenario: Scenario, phases: PhaseVector, samples: int, seed: int
) -> list[McEstimate]:
    """Sample-average ergodic rate per user for a fixed phase vector."""
    if samples < 100:
        raise ValueError("need at least 100 samples for a meaningful estimate")
    rates = _ergodic_rate_samples(scenario, phases.theta, samples, seed)
    return _estimates_from_samples(rates)


@dataclass(frozen=True)
class McMoments:
    noise: list[McEstimate]
    signal: list[McEstimate]
    interference: dict[tuple[int, int], McEstimate]


def mc_moments(
    scenario: Scenario, phases: PhaseVector, samples: int, seed: int
) -> McMoments:
    """Empirical counterparts of the three closed-form channel moments."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    K = scenario.K
    n2_all = np.empty((samples, K))
    x2_all = np.empty((samples, K, K))
    chunk = _chunk_size(scenario)
    pos = 0
    for ci, start in enumerate(range(0, samples, chunk)):
        size = min(chunk, samples - start)
        G = _sample_cascaded(scenario, phases.theta, substream(seed, ci), size)
        n2, x2 = _kernels.channel_stats(np.ascontiguousarray(G))
        n2_all[pos : pos + size] = n2
        x2_all[pos : pos + size] = x2
        pos += size
    noise = _estimates_from_samples(n2_all)
    signal = _estimates_from_samples(n2_all**2)
    interference = {}
    for k in range(K):
        for i in range(K):
            if i != k:
                interference[(k, i)] = _estimates_from_samples(x2_all[:, k, i : i + 1])[0]
    return McMoments(noise=noise, signal=signal, interference=interference)


@dataclass(frozen=True)
class ConditionEstimate:
    mean: float
    std_error: float
    samples: int
    excluded: int


def mc_condition_number(
    scenario: Scenario,
    phases: PhaseVector,
    samples: int,
    seed: int,
    rank_tol: float = 1e-12,
) -> ConditionEstimate:
    """Mean ratio of the largest to smallest singular value of the cascaded
    channel.  Realizations that are numerically rank deficient (smallest
    singular value below rank_tol times the largest) are counted and
    excluded from the mean."""
    if scenario.K > min(scenario.M, scenario.N):
        raise ValueError("condition number needs K <= min(M, N)")
    conds = []
    excluded = 0
    chunk = _chunk_size(scenario)
    for ci, start in enumerate(range(0, samples, chunk)):
        size = min(chunk, samples - start)
        G = _sample_cascaded(scenario, phases.theta, substream(seed, ci), size)
        sv = np.linalg.svd(G, compute_uv=False)  # (size, K) descending
        ok = sv[:, -1] > rank_tol * sv[:, 0]
        excluded += int((~ok).sum())
        conds.append(sv[ok, 0] / sv[ok, -1])
    vals = np.concatenate(conds) if conds else np.empty(0)
    if vals.size == 0:
        return ConditionEstimate(math.nan, math.nan, 0, excluded)
    se = vals.std(ddof=1) / math.sqrt(vals.size) if vals.size > 1 else 0.0
    return ConditionEstimate(float(vals.mean()), float(se), int(vals.size), excluded)


def mc_random_phase_rate(
    scenario: Scenario,
    phase_draws: int,
    samples_per_draw: int,
    seed: int,
    bits: int | None = None,
) -> list[McEstimate]:
    """Rate under per-block random phases: outer average over fresh phase
    vectors, inner ergodic average over channel realizations.

    The standard error is taken across the per-draw means, which is the
    dominant (between-draw) noise.
    """
    if phase_draws < 2:
        raise ValueError("need at least 2 phase draws")
    K = scenario.K
    draw_means = np.empty((phase_draws, K))
    for d in range(phase_draws):
        phi = random_phases(scenario.N, substream(seed, 0, d), bits=bits)
        rates = _ergodic_rate_samples(scenario, phi.theta, samples_per_draw, seed, key=(1, d))
        draw_means[d] = rates.mean(axis=0)
    means = draw_means.mean(axis=0)
    ses = draw_means.std(axis=0, ddof=1) / math.sqrt(phase_draws)
    return [McEstimate(float(m), float(se), phase_draws * samples_per_draw) for m, se in zip(means, ses)]


def mc_random_phase_moment_rate(
    scenario: Scenario,
    samples: int,
    seed: int,
    bits: int | None = None,
    batches: int = 10,
) -> list[McEstimate]:
    """Rate formed from moments averaged jointly over phases and channels.

    Each sample draws a fresh random phase vector AND a fresh channel; the
    signal/interference/noise moments are averaged over everything before
    the SINR ratio is taken.  This is the quantity the random-phase rate
    ceiling approximates (the log of averaged moments, not the average of
    log rates, which keeps an O(1) spread from the per-draw array gains).
    Standard errors come from splitting the run into batches.
    """
    if samples < batches * 2:
        raise ValueError("need at least 2 samples per batch")
    K = scenario.K
    per_batch = samples // batches
    batch_rates = np.empty((batches, K))
    hbar, H2bar = los_components(scenario)
    d, eps = scenario.delta, scenario.epsilon
    p = scenario.p
    for b in range(batches):
        num = np.zeros(K)
        noise = np.zeros(K)
        inter = np.zeros((K, K))
        chunk = min(per_batch, max(8, _chunk_size(scenario)))
        done = 0
        ci = 0
        while done < per_batch:
            size = min(chunk, per_batch - done)
            rng = substream(seed, 2, b, ci)
            thetas = (
                rng.uniform(0.0, 2.0 * np.pi, size=(size, scenario.N))
                if bits is None
                else rng.integers(0, 2**bits, size=(size, scenario.N))
                * (2.0 * np.pi / 2**bits)
            )
            if scenario.pure_los:
                H2 = np.broadcast_to(
                    np.sqrt(scenario.beta) * H2bar, (size, scenario.M, scenario.N)
                )
                H1 = np.sqrt(scenario.alpha) * hbar
            else:
                H2 = np.sqrt(scenario.beta) * (
                    np.sqrt(d / (d + 1.0)) * H2bar
                    + np.sqrt(1.0 / (d + 1.0))
                    * complex_normal(rng, (size, scenario.M, scenario.N))
                )
                H1 = np.sqrt(scenario.alpha) * (
                    np.sqrt(eps / (eps + 1.0)) * hbar
                    + np.sqrt(1.0 / (eps + 1.0))
                    * complex_normal(rng, (size, scenario.N, K))
                )
            G = (H2 * np.exp(1j * thetas)[:, None, :]) @ H1
            n2, x2 = _kernels.channel_stats(np.ascontiguousarray(G))
            num += (n2**2).sum(axis=0)
            noise += n2.sum(axis=0)
            inter += x2.sum(axis=0)
            done += size
            ci += 1
        num /= per_batch
        noise /= per_batch
        inter /= per_batch
        for k in range(K):
            acc = sum(p[i] * inter[k, i] for i in range(K) if i != k)
            batch_rates[b, k] = np.log2(
                1.0 + p[k] * num[k] / (acc + scenario.sigma2 * noise[k])
            )
    means = batch_rates.mean(axis=0)
    ses = batch_rates.std(axis=0, ddof=1) / math.sqrt(batches)
    # mean of the per-batch moment rates; the batch spread gives the error
    return [McEstimate(float(means[k]), float(ses[k]), samples) for k in range(K)]
