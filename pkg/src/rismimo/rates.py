"""Closed-form uplink rates and their asymptotic / special-case variants.

The central quantity is the per-user achievable rate approximation

    R_k = log2(1 + p_k * signal_k / (sum_{i != k} p_i * interference_ki
                                     + sigma2 * noise_k)),

built from the moments of :mod:`rismimo.moments`.  The limit expressions
(power scaling, aligned-gain limit, random-phase ceiling, Rayleigh and
pure-LoS special cases, non-RIS baselines) are implemented as separate
operations rather than parameter limits of the main formula, so they can
serve as independent cross-checks.
All rates are in bits/s/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Scenario
from .moments import MomentSet, PhaseVector, array_gain, moment_set, user_gram


@dataclass(frozen=True)
class RateReport:
    per_user: np.ndarray
    sum_rate: float
    min_rate: float
    moments: MomentSet


def report_from_moments(scenario: Scenario, moments: MomentSet) -> RateReport:
    K = scenario.K
    p = scenario.p
    rates = np.empty(K)
    for k in range(K):
        inter = sum(p[i] * moments.interference[k, i] for i in range(K) if i != k)
        sinr = p[k] * moments.signal[k] / (inter + scenario.sigma2 * moments.noise[k])
        rates[k] = math.log2(1.0 + sinr)
    return RateReport(
        per_user=rates,
        sum_rate=float(rates.sum()),
        min_rate=float(rates.min()),
        moments=moments,
    )


def closed_form_rates(scenario: Scenario, phases: PhaseVector) -> RateReport:
    """Per-user, sum and minimum closed-form rates for a fixed phase vector."""
    return report_from_moments(scenario, moment_set(scenario, phases))


def power_scaled_rate(scenario: Scenario, phases: PhaseVector, eu: float) -> np.ndarray:
    """Limit rates when every user transmits eu/M and M grows large.

    Only the terms of the signal, interference and noise moments that keep
    pace with M survive; the result is a non-zero per-user ceiling.
    """
    if not eu > 0:
        raise ValueError("eu must be > 0")
    K, N = scenario.K, scenario.N
    d = scenario.delta
    eps = scenario.epsilon
    ba = scenario.beta * scenario.alpha
    f = np.array([array_gain(phases, scenario, k) for k in range(K)])
    f2 = np.abs(f) ** 2
    gram = user_gram(scenario)

    a3 = d * eps * f2 + (d + eps + 1.0) * N
    a1 = a3**2 + 2 * d * eps * f2 * (N * d + 2.0) + N * (N * d**2 + 2 * d + 2 * eps + 1.0)

    rates = np.empty(K)
    for k in range(K):
        num = eu * ba[k] / ((d + 1.0) * (eps[k] + 1.0)) * a1[k]
        den = scenario.sigma2 * a3[k]
        for i in range(K):
            if i == k:
                continue
            a2 = (
                eps[k] * eps[i] * abs(d * np.conj(f[k]) * f[i] + gram[k, i]) ** 2
                + (d**2 * N + 2 * d) * (eps[k] * f2[k] + eps[i] * f2[i])
                + N * (N * d**2 + 2 * d + eps[i] + eps[k] + 1.0)
            )
            den += eu * ba[i] / ((d + 1.0) * (eps[i] + 1.0)) * a2
        rates[k] = math.log2(1.0 + num / den)
    return rates


def nlos_power_scaling_limit(scenario: Scenario, eu: float) -> np.ndarray:
    """Power-scaling ceiling in the pure-NLoS environment (all Rician
    factors zero): log2(1 + eu*beta*alpha_k*(N+1) / (sum_i eu*beta*alpha_i
    + sigma2))."""
    if not eu > 0:
        raise ValueError("eu must be > 0")
    ba = scenario.beta * scenario.alpha
    N = scenario.N
    rates = np.empty(scenario.K)
    for k in range(scenario.K):
        inter = sum(eu * ba[i] for i in range(scenario.K) if i != k)
        rates[k] = math.log2(1.0 + eu * ba[k] * (N + 1.0) / (inter + scenario.sigma2))
    return rates


def non_ris_scaling_rate(gamma_k: float, eu: float, sigma2: float) -> float:
    """Power-scaling ceiling of a conventional (no panel) massive MIMO user."""
    return math.log2(1.0 + eu * gamma_k / sigma2)


def aligned_power_limit(scenario: Scenario, user: int, eu: float) -> float:
    """Rate ceiling of the favored user when the phases are aligned to it
    and its power shrinks like eu/(M N^2) (other users: eu/(M N)).

    All other users' rates vanish in this regime.  Requires a non-zero
    panel-BS Rician factor (the ceiling carries a 1/delta term).
    """
    if scenario.delta == 0:
        raise ValueError("aligned power limit is undefined for delta = 0")
    k = user
    eps = scenario.epsilon
    ak = scenario.alpha[k]
    num = eu * eps[k] / (eps[k] + 1.0)
    den = (1.0 + 1.0 / scenario.delta) * scenario.sigma2 / (scenario.beta * ak)
    for i in range(scenario.K):
        if i != k:
            den += eu * scenario.alpha[i] / ((eps[i] + 1.0) * ak)
    return math.log2(1.0 + num / den)


def random_phase_rate_limit(scenario: Scenario) -> np.ndarray:
    """Per-user ceiling when the phases are redrawn uniformly at random in
    every block and both array sizes grow without bound."""
    if scenario.delta == 0:
        raise ValueError("random-phase limit is undefined for delta = 0")
    if scenario.K < 2:
        raise ValueError("random-phase limit needs at least one interferer")
    d = scenario.delta
    p, a = scenario.p, scenario.alpha
    rates = np.empty(scenario.K)
    for k in range(scenario.K):
        inter = sum(p[i] * a[i] * d**2 for i in range(scenario.K) if i != k)
        rates[k] = math.log2(1.0 + p[k] * a[k] * (2 * d**2 + 2 * d + 1.0) / inter)
    return rates


def rayleigh_rate(scenario: Scenario) -> np.ndarray:
    """Rates in the rich-scattering environment (all Rician factors zero);
    the phases drop out entirely."""
    M, N = scenario.M, scenario.N
    p = scenario.p
    ba = scenario.beta * scenario.alpha
    rates = np.empty(scenario.K)
    for k in range(scenario.K):
        inter = sum(p[i] * ba[i] * (M + N) for i in range(scenario.K) if i != k)
        num = p[k] * ba[k] * (M * N + M + N + 1.0)
        rates[k] = math.log2(1.0 + num / (inter + scenario.sigma2))
    return rates


def rayleigh_rate_limits(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Large-M and large-N ceilings of the rich-scattering rate."""
    if scenario.K < 2:
        raise ValueError("rayleigh limits need at least one interferer")
    p, a = scenario.p, scenario.alpha
    m_inf = np.empty(scenario.K)
    n_inf = np.empty(scenario.K)
    for k in range(scenario.K):
        inter = sum(p[i] * a[i] for i in range(scenario.K) if i != k)
        m_inf[k] = math.log2(1.0 + p[k] * a[k] * (scenario.N + 1.0) / inter)
        n_inf[k] = math.log2(1.0 + p[k] * a[k] * (scenario.M + 1.0) / inter)
    return m_inf, n_inf


def pure_los_rate(scenario: Scenario, phases: PhaseVector) -> np.ndarray:
    """Rates when only deterministic paths exist; the SINR reduces to a
    ratio of scaled array gains."""
    M = scenario.M
    p = scenario.p
    ba = scenario.beta * scenario.alpha
    f2 = np.array([abs(array_gain(phases, scenario, k)) ** 2 for k in range(scenario.K)])
    rates = np.empty(scenario.K)
    for k in range(scenario.K):
        inter = sum(p[i] * ba[i] * M * f2[i] for i in range(scenario.K) if i != k)
        rates[k] = math.log2(1.0 + p[k] * ba[k] * M * f2[k] / (inter + scenario.sigma2))
    return rates


def ula_inner_product_sq(m: int, spacing_ratio: float, delta_sin: float) -> float:
    """|h̄_k^H h̄_i|^2 of two M-element uniform linear array steering
    vectors whose sine-of-angle difference is delta_sin.

    Closed form sin^2(pi*s*M*x) / sin^2(pi*s*x); the x = 0 singularity is
    removable and returns M^2 exactly.
    """
    x = math.pi * spacing_ratio * delta_sin
    if math.sin(x) == 0.0:
        return float(m) ** 2
    return math.sin(m * x) ** 2 / math.sin(x) ** 2


def non_ris_los_rate(
    gammas: np.ndarray,
    ula_angles: np.ndarray,
    m: int,
    powers: np.ndarray,
    sigma2: float,
    spacing_ratio: float = 0.5,
) -> np.ndarray:
    """Per-user rates of a conventional uplink with deterministic linear-
    array steering channels and matched combining (no panel involved)."""
    gammas = np.asarray(gammas, dtype=float)
    ula_angles = np.asarray(ula_angles, dtype=float)
    powers = np.asarray(powers, dtype=float)
    K = gammas.shape[0]
    rates = np.empty(K)
    for k in range(K):
        inter = 0.0
        for i in range(K):
            if i == k:
                continue
            dsin = math.sin(ula_angles[i]) - math.sin(ula_angles[k])
            inter += powers[i] * gammas[i] * ula_inner_product_sq(m, spacing_ratio, dsin) / m
        rates[k] = math.log2(1.0 + powers[k] * gammas[k] * m / (inter + sigma2))
    return rates


def discrete_alignment_bound(n: int, bits: int) -> float:
    """Worst-case squared array gain after aligning and then quantizing the
    phases to a b-bit grid: N^2 cos^2(pi/2^b).  Needs b >= 2 (at one bit
    the cosine bound collapses to zero and carries no information)."""
    if bits <= 1:
        raise ValueError("alignment bound requires bits >= 2")
    return float(n) ** 2 * math.cos(math.pi / 2**bits) ** 2
