"""System geometry, Rician channel statistics and channel sampling.

The model is an uplink link through a reflecting surface: K single-antenna
users reach an M-antenna base station only via an N-element passive panel
(the direct user-BS path is assumed blocked).  Both arrays are square
planar arrays, so M and N must be perfect squares.  Each hop is Rician:
a deterministic steering-vector component plus an i.i.d. CN(0,1) part,
mixed by the per-link Rician factor.

All powers and gains are stored in linear units; dBm conversion happens
only at the config boundary (see :func:`scenario_from_dict`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * math.pi


def _is_perfect_square(x: int) -> bool:
    r = math.isqrt(int(x))
    return r * r == x


def normalize_angle(value: float) -> float:
    """Map an angle in radians onto [0, 2*pi)."""
    a = math.fmod(float(value), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class AnglePair:
    """Azimuth/elevation pair in radians, normalized to [0, 2*pi).

    Elevation values beyond [0, pi] are accepted on purpose: the reference
    experiment draws every angle uniformly from the full circle, physical
    or not, and we reproduce that convention.
    """

    azimuth: float
    elevation: float

    def __post_init__(self):
        object.__setattr__(self, "azimuth", normalize_angle(self.azimuth))
        object.__setattr__(self, "elevation", normalize_angle(self.elevation))


@dataclass(frozen=True)
class Scenario:
    """Full static description of one system setup.

    Fields
    ------
    M, N, K : BS antenna count, panel element count, user count.
        M and N must be perfect squares (square planar arrays).
    spacing_ratio : element spacing over carrier wavelength (d/lambda).
    delta : Rician factor of the panel-BS link.
    epsilon : per-user Rician factors, length K.
    beta : large-scale gain of the panel-BS link (linear power ratio).
    alpha : per-user large-scale gains (linear), length K.
    p : per-user transmit powers (linear), length K.
    sigma2 : noise power, same linear unit as p.
    ris_bs_angles : (bs_aoa_az, bs_aoa_el, ris_aod_az, ris_aod_el).
    user_angles : per-user AoA at the panel, length K.
    pure_los : when True the random channel parts are dropped entirely
        (the infinite-Rician-factor limit, kept as a flag to avoid
        floating-point infinities in the mixing coefficients).
    """

    M: int
    N: int
    K: int
    delta: float
    epsilon: np.ndarray
    beta: float
    alpha: np.ndarray
    p: np.ndarray
    sigma2: float
    ris_bs_angles: tuple[float, float, float, float]
    user_angles: tuple[AnglePair, ...]
    spacing_ratio: float = 0.5
    pure_los: bool = False

    def __post_init__(self):
        for name in ("M", "N", "K"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        for name in ("M", "N"):
            if not _is_perfect_square(getattr(self, name)):
                raise ValueError(f"{name}={getattr(self, name)} is not a perfect square")
        if not self.spacing_ratio > 0:
            raise ValueError("spacing_ratio must be > 0")
        for name in ("epsilon", "alpha", "p"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.K,):
                raise ValueError(f"{name} must have length K={self.K}, got shape {arr.shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} entries must be finite and non-negative")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ValueError("delta must be finite and non-negative")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError("beta must be finite and non-negative")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")
        angles = tuple(normalize_angle(a) for a in self.ris_bs_angles)
        if len(angles) != 4:
            raise ValueError("ris_bs_angles must hold 4 angles")
        object.__setattr__(self, "ris_bs_angles", angles)
        users = tuple(
            a if isinstance(a, AnglePair) else AnglePair(*a) for a in self.user_angles
        )
        if len(users) != self.K:
            raise ValueError(f"user_angles must have length K={self.K}")
        object.__setattr__(self, "user_angles", users)

    @property
    def bs_aoa(self) -> AnglePair:
        return AnglePair(self.ris_bs_angles[0], self.ris_bs_angles[1])

    @property
    def ris_aod(self) -> AnglePair:
        return AnglePair(self.ris_bs_angles[2], self.ris_bs_angles[3])


@dataclass(frozen=True)
class ChannelRealization:
    """One sampled pair of hop matrices: H1 is N x K, H2 is M x N."""

    H1: np.ndarray
    H2: np.ndarray

    def __post_init__(self):
        if self.H1.ndim != 2 or self.H2.ndim != 2 or self.H2.shape[1] != self.H1.shape[0]:
            raise ValueError(
                f"incompatible hop shapes H1 {self.H1.shape}, H2 {self.H2.shape}"
            )


def array_response(X: int, spacing_ratio: float, angles: AnglePair) -> np.ndarray:
    """Steering vector of a sqrt(X) x sqrt(X) square planar array.

    Element n (0-based) sits at grid position x = n // sqrt(X),
    y = n % sqrt(X) and contributes
    exp(j*2*pi*spacing_ratio*(x*sin(az)*sin(el) + y*cos(el))).
    """
    if not _is_perfect_square(X):
        raise ValueError(f"array size {X} is not a perfect square")
    if not spacing_ratio > 0:
        raise ValueError("spacing_ratio must be > 0")
    sq = math.isqrt(X)
    n = np.arange(X)
    x = n // sq
    y = n % sq
    phase = TWO_PI * spacing_ratio * (
        x * math.sin(angles.azimuth) * math.sin(angles.elevation)
        + y * math.cos(angles.elevation)
    )
    return np.exp(1j * phase)


def los_components(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic channel parts: (h̄ users stacked N x K, rank-one M x N)."""
    hbar = np.stack(
        [array_response(scenario.N, scenario.spacing_ratio, a) for a in scenario.user_angles],
        axis=1,
    )
    a_m = array_response(scenario.M, scenario.spacing_ratio, scenario.bs_aoa)
    a_n = array_response(scenario.N, scenario.spacing_ratio, scenario.ris_aod)
    H2bar = np.outer(a_m, a_n.conj())
    return hbar, H2bar


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0,1) samples: real and imaginary parts each N(0, 1/2)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def sample_channels(scenario: Scenario, rng: np.random.Generator) -> ChannelRealization:
    """Draw one Rician realization of both hops.

    The random parts are CN(0,1) i.i.d.; mixing weights follow from the
    Rician factors.  With ``pure_los`` set, the realization is exactly the
    scaled deterministic components and the stream is not consumed.
    """
    hbar, H2bar = los_components(scenario)
    sa = np.sqrt(scenario.alpha)
    if scenario.pure_los:
        H1 = sa * hbar
        H2 = np.sqrt(scenario.beta) * H2bar
        return ChannelRealization(H1=H1, H2=H2)
    d = scenario.delta
    eps = scenario.epsilon
    Ht2 = complex_normal(rng, (scenario.M, scenario.N))
    ht = complex_normal(rng, (scenario.N, scenario.K))
    H2 = np.sqrt(scenario.beta) * (
        np.sqrt(d / (d + 1.0)) * H2bar + np.sqrt(1.0 / (d + 1.0)) * Ht2
    )
    H1 = sa * (np.sqrt(eps / (eps + 1.0)) * hbar + np.sqrt(1.0 / (eps + 1.0)) * ht)
    return ChannelRealization(H1=H1, H2=H2)


def cascaded_channel(realization: ChannelRealization, theta: np.ndarray) -> np.ndarray:
    """Combine both hops through the reflection phases: H2 diag(e^{j theta}) H1."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (realization.H2.shape[1],):
        raise ValueError(
            f"phase vector length {theta.shape} does not match N={realization.H2.shape[1]}"
        )
    return (realization.H2 * np.exp(1j * theta)) @ realization.H1


def path_loss(distance: float, exponent: float) -> float:
    """Large-scale gain 1/(1000 * distance^exponent), distance in meters."""
    if not distance > 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    return 1.0 / (1000.0 * distance**exponent)


def dbm_to_linear(dbm: float) -> float:
    return 10.0 ** (float(dbm) / 10.0)


# ---------------------------------------------------------------------------
# Serialization.  Field names mirror the dataclass exactly; an optional
# "dbm" block may carry p / sigma2 in dBm, converted on load.
# ---------------------------------------------------------------------------

def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "M": scenario.M,
        "N": scenario.N,
        "K": scenario.K,
        "spacing_ratio": scenario.spacing_ratio,
        "delta": scenario.delta,
        "epsilon": list(map(float, scenario.epsilon)),
        "beta": scenario.beta,
        "alpha": list(map(float, scenario.alpha)),
        "p": list(map(float, scenario.p)),
        "sigma2": scenario.sigma2,
        "ris_bs_angles": list(scenario.ris_bs_angles),
        "user_angles": [[a.azimuth, a.elevation] for a in scenario.user_angles],
        "pure_los": scenario.pure_los,
    }


def scenario_from_dict(data: dict) -> Scenario:
    d = dict(data)
    dbm = d.pop("dbm", None)
    if dbm:
        if "p" in dbm:
            val = dbm["p"]
            k = int(d["K"])
            d["p"] = [dbm_to_linear(v) for v in (val if isinstance(val, list) else [val] * k)]
        if "sigma2" in dbm:
            d["sigma2"] = dbm_to_linear(dbm["sigma2"])
    return Scenario(
        M=d["M"],
        N=d["N"],
        K=d["K"],
        spacing_ratio=d.get("spacing_ratio", 0.5),
        delta=d["delta"],
        epsilon=np.asarray(d["epsilon"], dtype=float),
        beta=d["beta"],
        alpha=np.asarray(d["alpha"], dtype=float),
        p=np.asarray(d["p"], dtype=float),
        sigma2=d["sigma2"],
        ris_bs_angles=tuple(d["ris_bs_angles"]),
        user_angles=tuple(AnglePair(*a) for a in d["user_angles"]),
        pure_los=bool(d.get("pure_los", False)),
    )


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if path.suffix == ".toml":
        try:
            import tomllib  # py311+
        except ImportError:
            import tomli as tomllib
        data = tomllib.loads(path.read_text())
    else:
        data = json.loads(path.read_text())
    return scenario_from_dict(data)


def with_updates(scenario: Scenario, **changes) -> Scenario:
    """Copy of the scenario with selected fields replaced (re-validated)."""
    return replace(scenario, **changes)
