"""Closed-form channel moments and the passive array-gain functional.

Everything here is a deterministic function of the scenario statistics and
the reflection phases.  The three moments are the mean squared norm, the
mean fourth-power norm and the mean squared pairwise inner product of the
cascaded channel columns; together they fully determine the closed-form
rate.  The formulas are kept in the exact grouped form they were derived
in, term by term, so each line can be audited against the Monte Carlo
oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import TWO_PI, Scenario, los_components


@dataclass(frozen=True)
class PhaseVector:
    """N reflection phases plus their domain.

    ``bits is None`` means continuous phases in [0, 2*pi); an integer b
    restricts every phase to the uniform 2**b-point grid
    {0, 2*pi/2**b, ...}.  Discrete vectors must sit exactly on the grid.
    """

    theta: np.ndarray
    bits: int | None = None

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        theta = np.mod(theta, TWO_PI)
        theta[theta == TWO_PI] = 0.0
        if self.bits is not None:
            b = int(self.bits)
            if b < 1:
                raise ValueError("bits must be >= 1 for a discrete phase vector")
            step = TWO_PI / (2**b)
            levels = np.round(theta / step)
            if np.any(levels * step != theta):
                raise ValueError("discrete phases must lie exactly on the 2^bits grid")
            object.__setattr__(self, "bits", b)
        theta.flags.writeable = False
        object.__setattr__(self, "theta", theta)

    def __len__(self) -> int:
        return self.theta.shape[0]

    @classmethod
    def from_levels(cls, levels: np.ndarray, bits: int) -> "PhaseVector":
        step = TWO_PI / (2 ** int(bits))
        lv = np.mod(np.asarray(levels, dtype=np.int64), 2 ** int(bits))
        return cls(theta=lv * step, bits=int(bits))


def random_phases(n: int, rng: np.random.Generator, bits: int | None = None) -> PhaseVector:
    """Uniform random phase vector, continuous or on the b-bit grid."""
    if bits is None:
        return PhaseVector(theta=rng.uniform(0.0, TWO_PI, size=n))
    return PhaseVector.from_levels(rng.integers(0, 2 ** int(bits), size=n), bits)


@dataclass(frozen=True)
class MomentSet:
    """The three channel moments for every user / user pair.

    noise[k]       mean squared norm of column k,
    signal[k]      mean fourth power of the norm of column k,
    interference[k, i]  mean |g_k^H g_i|^2 for k != i (diagonal is NaN).
    """

    noise: np.ndarray
    signal: np.ndarray
    interference: np.ndarray


def element_offsets(scenario: Scenario, user: int) -> np.ndarray:
    """Per-element phase offsets of the cascade toward one user.

    Offset n is 2*pi*spacing_ratio*(x*p_c + y*q_c) on the square grid
    (x = n // sqrt(N), y = n % sqrt(N)), where p_c and q_c combine the
    user's AoA at the panel with the panel's AoD toward the BS.
    """
    if not 0 <= user < scenario.K:
        raise ValueError(f"user index {user} out of range for K={scenario.K}")
    ua = scenario.user_angles[user]
    aod_az, aod_el = scenario.ris_bs_angles[2], scenario.ris_bs_angles[3]
    p_c = math.sin(ua.azimuth) * math.sin(ua.elevation) - math.sin(aod_az) * math.sin(aod_el)
    q_c = math.cos(ua.elevation) - math.cos(aod_el)
    sq = math.isqrt(scenario.N)
    n = np.arange(scenario.N)
    x = n // sq
    y = n % sq
    return TWO_PI * scenario.spacing_ratio * (x * p_c + y * q_c)


def all_element_offsets(scenario: Scenario) -> np.ndarray:
    """Stacked offsets for all users, shape (K, N)."""
    return np.stack([element_offsets(scenario, k) for k in range(scenario.K)])


def array_gain(phases: PhaseVector, scenario: Scenario, user: int) -> complex:
    """Complex array gain of the panel toward one user: sum over elements
    of exp(j*(offset_n + theta_n)).  Its modulus is at most N, with
    equality when the phases cancel the offsets exactly."""
    zeta = element_offsets(scenario, user)
    return complex(np.exp(1j * (zeta + phases.theta)).sum())


def aligned_phases(scenario: Scenario, user: int, bits: int | None = None) -> PhaseVector:
    """Phases that maximize the array gain toward one user.

    Continuous: theta_n = -offset_n mod 2*pi, reaching |gain| = N.
    Discrete: the continuous solution rounded per element to the nearest
    grid point (ties toward the smaller phase), which keeps
    |gain|^2 >= N^2 cos^2(pi/2^bits).
    """
    target = np.mod(-element_offsets(scenario, user), TWO_PI)
    if bits is None:
        return PhaseVector(theta=target)
    step = TWO_PI / (2 ** int(bits))
    levels = np.ceil(target / step - 0.5).astype(np.int64)
    return PhaseVector.from_levels(levels, int(bits))


def user_gram(scenario: Scenario) -> np.ndarray:
    """Inner products of the deterministic user vectors: gram[k, i] = h̄_k^H h̄_i."""
    hbar, _ = los_components(scenario)
    return hbar.conj().T @ hbar


def noise_moment(scenario: Scenario, phases: PhaseVector, user: int) -> float:
    """Mean squared norm of cascaded column ``user``."""
    k = user
    M, N = scenario.M, scenario.N
    ba = scenario.beta * scenario.alpha[k]
    if scenario.pure_los:
        return M * ba * abs(array_gain(phases, scenario, k)) ** 2
    d, e = scenario.delta, scenario.epsilon[k]
    f2 = abs(array_gain(phases, scenario, k)) ** 2
    return M * ba / ((d + 1.0) * (e + 1.0)) * (d * e * f2 + (d + e + 1.0) * N)


def signal_moment(scenario: Scenario, phases: PhaseVector, user: int) -> float:
    """Mean fourth power of the norm of cascaded column ``user``."""
    k = user
    M, N = scenario.M, scenario.N
    ba = scenario.beta * scenario.alpha[k]
    f2 = abs(array_gain(phases, scenario, k)) ** 2
    if scenario.pure_los:
        return (M * ba * f2) ** 2
    d, e = scenario.delta, scenario.epsilon[k]
    c = ba / ((d + 1.0) * (e + 1.0))
    return M * c**2 * (
        M * (d * e) ** 2 * f2**2
        + 2 * d * e * f2 * (2 * M * N * d + M * N * e + M * N + 2 * M + N * e + N + 2)
        + M * N**2 * (2 * d**2 + e**2 + 2 * d * e + 2 * d + 2 * e + 1)
        + N**2 * (e**2 + 2 * d * e + 2 * d + 2 * e + 1)
        + M * N * (2 * d + 2 * e + 1)
        + N * (2 * d + 2 * e + 1)
    )


def interference_moment(scenario: Scenario, phases: PhaseVector, user_k: int, user_i: int) -> float:
    """Mean squared inner product of cascaded columns k and i (k != i)."""
    if user_k == user_i:
        raise ValueError("interference moment needs two distinct users")
    k, i = user_k, user_i
    M, N = scenario.M, scenario.N
    fk = array_gain(phases, scenario, k)
    fi = array_gain(phases, scenario, i)
    f2k, f2i = abs(fk) ** 2, abs(fi) ** 2
    gram = user_gram(scenario)
    baki = scenario.beta**2 * scenario.alpha[i] * scenario.alpha[k]
    if scenario.pure_los:
        return M * baki * M * f2k * f2i
    d = scenario.delta
    ek, ei = scenario.epsilon[k], scenario.epsilon[i]
    c = baki / ((d + 1.0) ** 2 * (ek + 1.0) * (ei + 1.0))
    cross = (np.conj(fk) * fi * gram[i, k]).real
    return M * c * (
        M * d**2 * ek * ei * f2k * f2i
        + d * ek * f2k * (d * M * N + N * ei + N + 2 * M)
        + d * ei * f2i * (d * M * N + N * ek + N + 2 * M)
        + N**2 * (M * d**2 + d * (ei + ek + 2.0) + (ek + 1.0) * (ei + 1.0))
        + M * N * (2 * d + ei + ek + 1.0)
        + M * ek * ei * abs(gram[k, i]) ** 2
        + 2 * M * d * ek * ei * cross
    )


def moment_set(scenario: Scenario, phases: PhaseVector) -> MomentSet:
    """All three moments for every user and user pair."""
    K = scenario.K
    noise = np.array([noise_moment(scenario, phases, k) for k in range(K)])
    signal = np.array([signal_moment(scenario, phases, k) for k in range(K)])
    interference = np.full((K, K), np.nan)
    for k in range(K):
        for i in range(K):
            if i != k:
                interference[k, i] = interference_moment(scenario, phases, k, i)
    return MomentSet(noise=noise, signal=signal, interference=interference)


def coincident_user_pairs(scenario: Scenario, tol: float = 1e-9) -> list[tuple[int, int]]:
    """User pairs whose direction parameters (p_c, q_c) nearly coincide.

    Such pairs make the bounded-interference assumption of the aligned-gain
    analysis vacuous; validation surfaces them as warnings.
    """
    po = np.array(
        [
            (
                math.sin(a.azimuth) * math.sin(a.elevation),
                math.cos(a.elevation),
            )
            for a in scenario.user_angles
        ]
    )
    out = []
    for k in range(scenario.K):
        for i in range(k + 1, scenario.K):
            if np.all(np.abs(po[k] - po[i]) <= tol):
                out.append((k, i))
    return out
