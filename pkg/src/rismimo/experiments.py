"""Named experiment harness: sweeps, CSV output and the built-in studies.

Each experiment sweeps one parameter of a base scenario and writes a tidy
CSV (one row per sweep point per metric) plus a JSON sidecar with run
metadata.  The column set is fixed: experiment, sweep_param, sweep_value,
metric, unit, value, std_error, samples; closed-form rows leave std_error
and samples empty.  Re-running the same spec with the same seed
reproduces the CSV byte for byte.

The eight built-in experiments mirror the reference study's figures
(moment validation, Rician-factor / path-loss trade-offs, condition
numbers, antenna/user scaling, power scaling, discrete phases) at two
sizes: ``desk`` for laptop-scale runs and ``paper`` for the full grids.
"""

from __future__ import annotations

import csv
import json
import math
import subprocess
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import _kernels
from .channel import (
    AnglePair,
    Scenario,
    path_loss,
    scenario_from_dict,
    scenario_to_dict,
    with_updates,
)
from .ga import GAConfig, ga_config_from_dict, ga_config_to_dict, ga_optimize
from .moments import (
    PhaseVector,
    aligned_phases,
    all_element_offsets,
    coincident_user_pairs,
    random_phases,
    user_gram,
)
from .montecarlo import (
    McEstimate,
    _ergodic_rate_samples,
    mc_condition_number,
    mc_random_phase_rate,
    substream,
)
from .rates import closed_form_rates, power_scaled_rate


class ConfigError(Exception):
    """Bad experiment specification (unknown fields, empty sweeps, ...)."""


# --------------------------------------------------------------- geometry

PAPER_BS_POS = (0.0, 0.0, 25.0)
PAPER_RIS_POS = (5.0, 100.0, 30.0)
PAPER_CIRCLE_CENTER = (5.0, 100.0)
PAPER_CIRCLE_RADIUS = 5.0
PAPER_USER_HEIGHT = 1.6
PAPER_EXPONENT = 2.8
PAPER_POWER_DBM = 30.0
PAPER_NOISE_DBM = -104.0


@dataclass(frozen=True)
class GeometryInfo:
    """Distances retained so path losses can be recomputed in sweeps."""

    ris_bs_distance: float
    user_distances: tuple[float, ...]
    exponent: float


def scenario_from_geometry(
    bs_pos=PAPER_BS_POS,
    ris_pos=PAPER_RIS_POS,
    circle_center=PAPER_CIRCLE_CENTER,
    circle_radius=PAPER_CIRCLE_RADIUS,
    user_height=PAPER_USER_HEIGHT,
    count: int = 4,
    exponent: float = PAPER_EXPONENT,
    seed: int = 0,
    M: int = 64,
    N: int = 16,
    delta: float = 1.0,
    epsilon: float = 10.0,
    power_dbm: float = PAPER_POWER_DBM,
    noise_dbm: float = PAPER_NOISE_DBM,
    spacing_ratio: float = 0.5,
) -> tuple[Scenario, GeometryInfo]:
    """Scenario from 3-D positions: users evenly spaced on a half circle.

    Path losses follow 1/(1000 d^exponent) from the Euclidean distances;
    all AoA/AoD are drawn once, uniformly from [0, 2*pi), from the given
    seed and frozen thereafter.
    """
    if not circle_radius > 0:
        raise ValueError("circle_radius must be > 0")
    if count < 1:
        raise ValueError("count must be >= 1")
    bs = np.asarray(bs_pos, dtype=float)
    ris = np.asarray(ris_pos, dtype=float)
    d0 = float(np.linalg.norm(ris - bs))
    if count == 1:
        arc = np.array([math.pi / 2])
    else:
        arc = np.linspace(0.0, math.pi, count)
    users = np.stack(
        [
            circle_center[0] + circle_radius * np.cos(arc),
            circle_center[1] + circle_radius * np.sin(arc),
            np.full(count, user_height),
        ],
        axis=1,
    )
    dists = np.linalg.norm(users - ris, axis=1)
    rng = np.random.default_rng(seed)
    ris_bs_angles = tuple(rng.uniform(0.0, 2 * math.pi, size=4))
    user_angles = tuple(
        AnglePair(*rng.uniform(0.0, 2 * math.pi, size=2)) for _ in range(count)
    )
    scenario = Scenario(
        M=M,
        N=N,
        K=count,
        spacing_ratio=spacing_ratio,
        delta=delta,
        epsilon=np.full(count, float(epsilon)),
        beta=path_loss(d0, exponent),
        alpha=np.array([path_loss(d, exponent) for d in dists]),
        p=np.full(count, 10.0 ** (power_dbm / 10.0)),
        sigma2=10.0 ** (noise_dbm / 10.0),
        ris_bs_angles=ris_bs_angles,
        user_angles=user_angles,
    )
    return scenario, GeometryInfo(d0, tuple(map(float, dists)), exponent)


def paper_scenario(seed: int = 0, **overrides) -> Scenario:
    """The reference setup: M=64, N=16, K=4, 30 dBm, -104 dBm, delta=1,
    epsilon=10, users on the half circle next to the panel."""
    scenario, _ = scenario_from_geometry(seed=seed)
    return with_updates(scenario, **overrides) if overrides else scenario


# ------------------------------------------------------------------ spec

CSV_COLUMNS = (
    "experiment",
    "sweep_param",
    "sweep_value",
    "metric",
    "unit",
    "value",
    "std_error",
    "samples",
)

RATE_UNIT = "bit/s/Hz"

VIRTUAL_SWEEPS = ("beta_exponent",)


@dataclass
class McSettings:
    samples: int = 2000
    phase_draws: int = 100
    samples_per_draw: int = 20
    condition_samples: int = 400
    condition: bool = False


@dataclass
class ExperimentSpec:
    name: str
    scenario: Scenario
    sweep_param: str
    sweep_values: list
    seed: int = 0
    ga: GAConfig | None = None
    mc: McSettings = field(default_factory=McSettings)
    output_dir: Path = Path("results")
    scale: str = "desk"
    geometry: GeometryInfo | None = None
    builtin: str | None = None


def _scenario_sweep_fields() -> set[str]:
    return {
        "M",
        "N",
        "K",
        "delta",
        "beta",
        "sigma2",
        "spacing_ratio",
    }


def _ga_sweep_fields() -> set[str]:
    return set(ga_config_to_dict(GAConfig()).keys())


def validate_spec(spec: ExperimentSpec) -> tuple[list[str], list[str]]:
    """Configuration errors and advisory warnings for a spec."""
    errors: list[str] = []
    warnings: list[str] = []
    if not spec.name:
        errors.append("experiment name is empty")
    allowed = _scenario_sweep_fields() | _ga_sweep_fields() | set(VIRTUAL_SWEEPS)
    if spec.sweep_param not in allowed:
        errors.append(
            f"unknown sweep parameter {spec.sweep_param!r}; "
            f"expected one of {sorted(allowed)}"
        )
    if not spec.sweep_values:
        errors.append("sweep value list is empty")
    if spec.sweep_param in ("M", "N"):
        for v in spec.sweep_values:
            r = math.isqrt(int(v))
            if r * r != int(v):
                errors.append(f"sweep value {v} for {spec.sweep_param} is not a perfect square")
    if spec.sweep_param == "beta_exponent" and spec.geometry is None:
        errors.append("sweep over beta_exponent needs geometry information")
    if spec.sweep_param == "K" and spec.scenario.K < max(
        int(v) for v in spec.sweep_values or [0]
    ):
        errors.append("K sweep values exceed the number of configured users")
    pairs = coincident_user_pairs(spec.scenario)
    for k, i in pairs:
        warnings.append(
            f"users {k} and {i} share (nearly) identical direction parameters; "
            "aligned-gain interference bounds are vacuous for this pair"
        )
    return errors, warnings


# ----------------------------------------------------------- computation

Row = tuple


def _apply_sweep(spec: ExperimentSpec, value):
    """Scenario/GA pair at one sweep point."""
    scn, ga = spec.scenario, spec.ga
    param = spec.sweep_param
    if param == "beta_exponent":
        scn = with_updates(scn, beta=path_loss(spec.geometry.ris_bs_distance, float(value)))
    elif param == "K":
        k = int(value)
        scn = with_updates(
            scn,
            K=k,
            epsilon=scn.epsilon[:k],
            alpha=scn.alpha[:k],
            p=scn.p[:k],
            user_angles=scn.user_angles[:k],
        )
    elif param in _scenario_sweep_fields():
        try:
            scn = with_updates(scn, **{param: type(getattr(scn, param))(value)})
        except ValueError as exc:
            raise ConfigError(f"sweep value {value!r} for {param!r}: {exc}") from exc
    elif ga is not None and param in _ga_sweep_fields():
        try:
            ga = replace(ga, **{param: value})
        except ValueError as exc:
            raise ConfigError(f"sweep value {value!r} for {param!r}: {exc}") from exc
    else:
        raise ConfigError(f"cannot apply sweep parameter {param!r}")
    return scn, ga


def _batch_rates_cf(scn: Scenario, thetas: np.ndarray) -> np.ndarray:
    """Closed-form per-user rates for a stack of phase vectors, (D, K)."""
    zeta = np.ascontiguousarray(all_element_offsets(scn))
    f = _kernels.gain_batch(np.ascontiguousarray(thetas), zeta)
    if scn.pure_los:
        f2 = np.abs(f) ** 2
        sig = scn.p * scn.beta * scn.alpha * scn.M * f2
        inter = sig.sum(axis=1, keepdims=True) - sig
        return np.log2(1.0 + sig / (inter + scn.sigma2))
    return _kernels.rates_batch(
        f,
        np.ascontiguousarray(user_gram(scn)),
        scn.M,
        scn.N,
        scn.delta,
        scn.epsilon,
        scn.beta * scn.alpha,
        scn.p,
        scn.sigma2,
    )


def _random_phase_cf(scn: Scenario, draws: int, seed: int, bits: int | None = None):
    """Mean closed-form (sum, min) rate over seeded random phase vectors."""
    rng = substream(seed, 90)
    if bits is None:
        thetas = rng.uniform(0.0, 2 * math.pi, size=(draws, scn.N))
    else:
        thetas = rng.integers(0, 2**bits, size=(draws, scn.N)) * (2 * math.pi / 2**bits)
    rates = _batch_rates_cf(scn, thetas)
    return float(rates.sum(axis=1).mean()), float(rates.min(axis=1).mean())


def _mc_sum_min(scn: Scenario, phases: PhaseVector, samples: int, seed: int):
    """Monte Carlo (sum, min) ergodic rates with standard errors."""
    per_sample = _ergodic_rate_samples(scn, phases.theta, samples, seed)
    sums = per_sample.sum(axis=1)
    user_means = per_sample.mean(axis=0)
    kmin = int(np.argmin(user_means))
    sum_est = McEstimate(
        float(sums.mean()), float(sums.std(ddof=1) / math.sqrt(samples)), samples
    )
    min_est = McEstimate(
        float(user_means[kmin]),
        float(per_sample[:, kmin].std(ddof=1) / math.sqrt(samples)),
        samples,
    )
    return sum_est, min_est


def _ga_phases(scn: Scenario, ga: GAConfig, objective: str, seed: int, bits=None) -> PhaseVector:
    cfg = replace(ga, objective=objective, bits=bits if bits is not None else ga.bits)
    return ga_optimize(scn, cfg, seed).best.phases


def _cf_row(value, metric: str, x: float, unit: str = RATE_UNIT) -> Row:
    return (value, metric, unit, x, "", "")


def _mc_row(value, metric: str, est: McEstimate, unit: str = RATE_UNIT) -> Row:
    return (value, metric, unit, est.mean, est.std_error, est.samples)


def _rate_scheme_rows(
    v, scn: Scenario, label: str, phases: PhaseVector, mc: McSettings, seed: int
) -> list[Row]:
    rep = closed_form_rates(scn, phases)
    rows = [
        _cf_row(v, f"sum_rate_{label}_cf", rep.sum_rate),
        _cf_row(v, f"min_rate_{label}_cf", rep.min_rate),
    ]
    sum_est, min_est = _mc_sum_min(scn, phases, mc.samples, seed)
    rows.append(_mc_row(v, f"sum_rate_{label}_mc", sum_est))
    rows.append(_mc_row(v, f"min_rate_{label}_mc", min_est))
    return rows


def _random_scheme_rows(v, scn: Scenario, mc: McSettings, seed: int) -> list[Row]:
    cf_sum, cf_min = _random_phase_cf(scn, mc.phase_draws, seed)
    rows = [
        _cf_row(v, "sum_rate_random_cf", cf_sum),
        _cf_row(v, "min_rate_random_cf", cf_min),
    ]
    ests = mc_random_phase_rate(
        scn, max(2, mc.phase_draws // 4), mc.samples_per_draw, seed
    )
    total = McEstimate(
        float(sum(e.mean for e in ests)),
        float(math.sqrt(sum(e.std_error**2 for e in ests))),
        ests[0].samples,
    )
    worst = min(ests, key=lambda e: e.mean)
    rows.append(_mc_row(v, "sum_rate_random_mc", total))
    rows.append(_mc_row(v, "min_rate_random_mc", worst))
    return rows


def _generic_point(v, scn: Scenario, ga: GAConfig | None, mc: McSettings, seed: int) -> list[Row]:
    """Default metric set: the two optimized schemes, random and aligned."""
    ga = ga or GAConfig()
    rows: list[Row] = []
    for objective, label in (("sum", "max_sum"), ("min", "max_min")):
        phases = _ga_phases(scn, ga, objective, seed)
        rows += _rate_scheme_rows(v, scn, label, phases, mc, seed)
    rows += _random_scheme_rows(v, scn, mc, seed)
    rows += _rate_scheme_rows(v, scn, "aligned", aligned_phases(scn, 0, ga.bits), mc, seed)
    if mc.condition:
        est = mc_condition_number(
            scn, random_phases(scn.N, substream(seed, 91)), mc.condition_samples, seed
        )
        rows.append((v, "cond_random_mc", "ratio", est.mean, est.std_error, est.samples))
    return rows


# ------------------------------------------------------------- built-ins

def _desk_ga() -> GAConfig:
    return GAConfig(
        population=80,
        elites=4,
        crossover_pairs=60,
        mutation_parents=16,
        max_generations=150,
        stall_window=15,
    )


def _paper_ga() -> GAConfig:
    return GAConfig()


def _fig3_point(v, scn, ga, mc, seed):
    from .moments import interference_moment, signal_moment
    from .montecarlo import mc_moments

    rows = []
    for j in (1, 2):
        phi = random_phases(scn.N, substream(seed, 40, j))
        emp = mc_moments(scn, phi, mc.samples, seed + j)
        sig_cf = signal_moment(scn, phi, 0)
        int_cf = sum(interference_moment(scn, phi, 0, i) for i in range(1, scn.K))
        int_mc = [emp.interference[(0, i)] for i in range(1, scn.K)]
        int_mean = sum(e.mean for e in int_mc)
        int_se = math.sqrt(sum(e.std_error**2 for e in int_mc))
        rows += [
            _cf_row(v, f"signal_phi{j}_cf", sig_cf, unit="linear"),
            (v, f"signal_phi{j}_mc", "linear", emp.signal[0].mean, emp.signal[0].std_error, mc.samples),
            _cf_row(v, f"interf_phi{j}_cf", int_cf, unit="linear"),
            (v, f"interf_phi{j}_mc", "linear", int_mean, int_se, mc.samples),
        ]
    return rows


def _fig4_point(v, scn, ga, mc, seed):
    rows = []
    for objective, label in (("sum", "max_sum"), ("min", "max_min")):
        phases = _ga_phases(scn, ga, objective, seed)
        rows += _rate_scheme_rows(v, scn, label, phases, mc, seed)
    rows += _random_scheme_rows(v, scn, mc, seed)
    return rows


def _fig6_point(v, scn, ga, mc, seed):
    rows = []
    opt = _ga_phases(scn, ga, "min", seed)
    est_opt = mc_condition_number(scn, opt, mc.condition_samples, seed)
    rows.append((v, "cond_max_min_mc", "ratio", est_opt.mean, est_opt.std_error, est_opt.samples))
    per_draw = max(1, mc.condition_samples // 4)
    means = []
    for j in range(4):
        phi = random_phases(scn.N, substream(seed, 60, j))
        means.append(mc_condition_number(scn, phi, per_draw, seed + j).mean)
    means = np.array(means)
    rows.append(
        (v, "cond_random_mc", "ratio", float(means.mean()),
         float(means.std(ddof=1) / math.sqrt(len(means))), 4 * per_draw)
    )
    return rows


def _fig7_point(v, scn, ga, mc, seed):
    rows = []
    for n in (16, 64):
        s = with_updates(scn, N=n)
        phases = _ga_phases(s, ga, "min", seed)
        rep = closed_form_rates(s, phases)
        rows += [
            _cf_row(v, f"sum_rate_max_min_n{n}_cf", rep.sum_rate),
            _cf_row(v, f"min_rate_max_min_n{n}_cf", rep.min_rate),
        ]
        sum_est, min_est = _mc_sum_min(s, phases, mc.samples, seed)
        rows += [
            _mc_row(v, f"sum_rate_max_min_n{n}_mc", sum_est),
            _mc_row(v, f"min_rate_max_min_n{n}_mc", min_est),
        ]
        cf_sum, cf_min = _random_phase_cf(s, mc.phase_draws, seed)
        rows += [
            _cf_row(v, f"sum_rate_random_n{n}_cf", cf_sum),
            _cf_row(v, f"min_rate_random_n{n}_cf", cf_min),
        ]
    return rows


def _fig8_point(v, scn, ga, mc, seed):
    eu = 100.0  # mW, shared budget scaled down as eu/M
    rows = []
    scaled = with_updates(scn, p=np.full(scn.K, eu / scn.M))
    for n in (16, 64):
        s = with_updates(scaled, N=n)
        phases = _ga_phases(s, ga, "min", seed)
        rep = closed_form_rates(s, phases)
        rows.append(_cf_row(v, f"min_rate_max_min_n{n}_cf", rep.min_rate))
        _, min_est = _mc_sum_min(s, phases, mc.samples, seed)
        rows.append(_mc_row(v, f"min_rate_max_min_n{n}_mc", min_est))
        _, cf_min = _random_phase_cf(s, mc.phase_draws, seed)
        rows.append(_cf_row(v, f"min_rate_random_n{n}_cf", cf_min))
        limit = float(power_scaled_rate(s, phases, eu).min())
        rows.append(_cf_row(v, f"min_rate_limit_n{n}_cf", limit))
    return rows


def _fig9_point(v, scn, ga, mc, seed):
    rows = []
    phases = _ga_phases(scn, ga, "min", seed)
    rows += _rate_scheme_rows(v, scn, "max_min", phases, mc, seed)
    cf_sum, cf_min = _random_phase_cf(scn, mc.phase_draws, seed)
    rows += [
        _cf_row(v, "sum_rate_random_cf", cf_sum),
        _cf_row(v, "min_rate_random_cf", cf_min),
    ]
    return rows


def _fig10_point(v, scn, ga, mc, seed):
    rows = []
    domains = (("cont", None), ("b1", 1), ("b2", 2), ("b3", 3))
    for label, bits in domains:
        phases = _ga_phases(scn, ga, "min", seed, bits=bits)
        rep = closed_form_rates(scn, phases)
        rows.append(_cf_row(v, f"min_rate_max_min_{label}_cf", rep.min_rate))
        if label in ("cont", "b2"):
            _, min_est = _mc_sum_min(scn, phases, mc.samples, seed)
            rows.append(_mc_row(v, f"min_rate_max_min_{label}_mc", min_est))
    for label, bits in (("cont", None), ("b2", 2)):
        _, cf_min = _random_phase_cf(scn, mc.phase_draws, seed, bits=bits)
        rows.append(_cf_row(v, f"min_rate_random_{label}_cf", cf_min))
    return rows


@dataclass(frozen=True)
class BuiltinDef:
    sweep_param: str
    desk_values: tuple
    paper_values: tuple
    point_fn: object
    desk_mc: McSettings
    paper_mc: McSettings
    users: int = 4


BUILTINS: dict[str, BuiltinDef] = {
    "fig3-moments": BuiltinDef(
        "N",
        (4, 16, 36, 64),
        (4, 16, 36, 64, 100, 144, 196, 256),
        _fig3_point,
        McSettings(samples=10_000),
        McSettings(samples=100_000),
    ),
    "fig4-rician-sweep": BuiltinDef(
        "delta",
        (0.0, 1.0, 2.0, 4.0, 8.0),
        (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0),
        _fig4_point,
        McSettings(samples=2_000, phase_draws=100, samples_per_draw=20),
        McSettings(samples=10_000, phase_draws=1_000, samples_per_draw=10),
    ),
    "fig5-pathloss-sweep": BuiltinDef(
        "beta_exponent",
        (2.0, 2.4, 2.8, 3.2, 3.6),
        (2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0),
        _fig4_point,
        McSettings(samples=2_000, phase_draws=100, samples_per_draw=20),
        McSettings(samples=10_000, phase_draws=1_000, samples_per_draw=10),
    ),
    "fig6-condition": BuiltinDef(
        "N",
        (16, 36, 64),
        (16, 36, 64, 100, 144, 196, 256),
        _fig6_point,
        McSettings(condition_samples=400),
        McSettings(condition_samples=2_000),
    ),
    "fig7-antennas": BuiltinDef(
        "M",
        (16, 64, 144, 256),
        (16, 64, 144, 256, 400, 576, 784, 1024),
        _fig7_point,
        McSettings(samples=1_500, phase_draws=100),
        McSettings(samples=10_000, phase_draws=1_000),
    ),
    "fig8-power-scaling": BuiltinDef(
        "M",
        (64, 256, 1024),
        (64, 256, 1024, 4096),
        _fig8_point,
        McSettings(samples=1_500, phase_draws=100),
        McSettings(samples=10_000, phase_draws=1_000),
    ),
    "fig9-users": BuiltinDef(
        "K",
        (2, 4, 6),
        (1, 2, 3, 4, 5, 6),
        _fig9_point,
        McSettings(samples=2_000, phase_draws=100, samples_per_draw=20),
        McSettings(samples=10_000, phase_draws=1_000, samples_per_draw=10),
        users=6,
    ),
    "fig10-discrete": BuiltinDef(
        "N",
        (4, 16, 36, 64),
        (4, 16, 36, 64, 100, 144, 196, 256),
        _fig10_point,
        McSettings(samples=1_500, phase_draws=100),
        McSettings(samples=10_000, phase_draws=1_000),
    ),
}


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


def builtin_spec(
    name: str, scale: str = "desk", seed: int = 0, output_dir: str | Path = "results"
) -> ExperimentSpec:
    if name not in BUILTINS:
        raise ConfigError(f"unknown builtin experiment {name!r}; available: {builtin_names()}")
    if scale not in ("desk", "paper"):
        raise ConfigError(f"scale must be 'desk' or 'paper', got {scale!r}")
    d = BUILTINS[name]
    scenario, geometry = scenario_from_geometry(count=d.users, seed=seed)
    return ExperimentSpec(
        name=name,
        scenario=scenario,
        sweep_param=d.sweep_param,
        sweep_values=list(d.desk_values if scale == "desk" else d.paper_values),
        seed=seed,
        ga=_desk_ga() if scale == "desk" else _paper_ga(),
        mc=d.desk_mc if scale == "desk" else d.paper_mc,
        output_dir=Path(output_dir),
        scale=scale,
        geometry=geometry,
        builtin=name,
    )


# ------------------------------------------------------------------- run

def _version_string() -> str:
    base = __version__
    try:
        rev = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if rev.returncode == 0:
            return f"{base}+g{rev.stdout.strip()}"
    except OSError:
        pass
    return base


def run_experiment(spec: ExperimentSpec) -> Path:
    """Execute all sweep points and write ``<name>.csv`` plus sidecar."""
    errors, _ = validate_spec(spec)
    if errors:
        raise ConfigError("; ".join(errors))
    t0 = time.perf_counter()
    point_fn = BUILTINS[spec.builtin].point_fn if spec.builtin else _generic_point
    rows: list[Row] = []
    for idx, v in enumerate(spec.sweep_values):
        scn, ga = _apply_sweep(spec, v)
        point_seed = int(
            np.random.SeedSequence([spec.seed, 7, idx]).generate_state(1)[0]
        )
        rows += point_fn(v, scn, ga, spec.mc, point_seed)

    spec.output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = spec.output_dir / f"{spec.name}.csv"
    try:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for v, metric, unit, value, se, samples in rows:
                writer.writerow(
                    [spec.name, spec.sweep_param, v, metric, unit, repr(float(value)), se, samples]
                )
    except OSError as exc:
        raise ConfigError(f"cannot write CSV to {csv_path}: {exc}") from exc

    meta = {
        "experiment": spec.name,
        "seed": spec.seed,
        "scale": spec.scale,
        "version": _version_string(),
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "rows": len(rows),
        "sweep": {"param": spec.sweep_param, "values": list(spec.sweep_values)},
        "mc": vars(spec.mc),
        "ga": ga_config_to_dict(spec.ga) if spec.ga else None,
        "scenario": scenario_to_dict(spec.scenario),
    }
    (spec.output_dir / f"{spec.name}.meta.json").write_text(json.dumps(meta, indent=2))
    return csv_path


# ------------------------------------------------------------- spec files

def load_spec(path: str | Path) -> ExperimentSpec:
    """Experiment spec from a TOML or JSON document.

    A document either names a builtin (``builtin = "fig4-rician-sweep"``
    with optional seed/scale/output overrides) or defines scenario, sweep
    and optional ga/mc blocks in full.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"spec file not found: {path}")
    if path.suffix == ".toml":
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        try:
            data = tomllib.loads(path.read_text())
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    else:
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc

    if "builtin" in data:
        return builtin_spec(
            data["builtin"],
            scale=data.get("scale", "desk"),
            seed=int(data.get("seed", 0)),
            output_dir=data.get("output", "results"),
        )

    for key in ("name", "scenario", "sweep"):
        if key not in data:
            raise ConfigError(f"spec is missing required key {key!r}")
    sweep = data["sweep"]
    if "param" not in sweep or "values" not in sweep:
        raise ConfigError("sweep block needs 'param' and 'values'")
    geometry = None
    sdata = data["scenario"]
    if "geometry" in sdata:
        g = sdata["geometry"]
        scenario, geometry = scenario_from_geometry(
            count=int(g.get("count", 4)),
            exponent=float(g.get("exponent", PAPER_EXPONENT)),
            seed=int(data.get("seed", 0)),
            M=int(g.get("M", 64)),
            N=int(g.get("N", 16)),
            delta=float(g.get("delta", 1.0)),
            epsilon=float(g.get("epsilon", 10.0)),
            power_dbm=float(g.get("power_dbm", PAPER_POWER_DBM)),
            noise_dbm=float(g.get("noise_dbm", PAPER_NOISE_DBM)),
        )
    else:
        try:
            scenario = scenario_from_dict(sdata)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"invalid scenario block: {exc}") from exc
    mc = McSettings(**data["mc"]) if "mc" in data else McSettings()
    ga = ga_config_from_dict(data["ga"]) if "ga" in data else None
    return ExperimentSpec(
        name=data["name"],
        scenario=scenario,
        sweep_param=sweep["param"],
        sweep_values=list(sweep["values"]),
        seed=int(data.get("seed", 0)),
        ga=ga,
        mc=mc,
        output_dir=Path(data.get("output", "results")),
        geometry=geometry,
    )
