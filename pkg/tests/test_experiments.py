import json
import math

import numpy as np
import pytest

from rismimo.channel import path_loss
from rismimo.experiments import (
    BUILTINS,
    ConfigError,
    ExperimentSpec,
    McSettings,
    builtin_names,
    builtin_spec,
    load_spec,
    paper_scenario,
    run_experiment,
    scenario_from_geometry,
    validate_spec,
)
from rismimo.ga import GAConfig


class TestGeometry:
    def test_ris_bs_distance_and_beta(self):
        scn, geo = scenario_from_geometry(count=4, seed=0)
        assert geo.ris_bs_distance == pytest.approx(math.sqrt(10050))
        assert scn.beta == pytest.approx(path_loss(math.sqrt(10050), 2.8))

    def test_single_user_at_circle_midpoint(self):
        _, geo = scenario_from_geometry(count=1, seed=0)
        # midpoint of the half circle: (5, 105, 1.6) vs panel at (5, 100, 30)
        expected = math.sqrt(5.0**2 + (30.0 - 1.6) ** 2)
        assert geo.user_distances[0] == pytest.approx(expected)

    def test_paper_defaults(self):
        scn = paper_scenario(seed=0)
        assert (scn.M, scn.N, scn.K) == (64, 16, 4)
        np.testing.assert_allclose(scn.p, 1000.0)
        assert scn.sigma2 == pytest.approx(10 ** (-10.4))
        assert scn.delta == 1.0
        np.testing.assert_allclose(scn.epsilon, 10.0)

    def test_angles_frozen_by_seed(self):
        a = paper_scenario(seed=5)
        b = paper_scenario(seed=5)
        c = paper_scenario(seed=6)
        assert a.ris_bs_angles == b.ris_bs_angles
        assert a.ris_bs_angles != c.ris_bs_angles

    def test_invalid_geometry(self):
        with pytest.raises(ValueError):
            scenario_from_geometry(circle_radius=0.0)
        with pytest.raises(ValueError):
            scenario_from_geometry(count=0)


class TestValidation:
    def test_unknown_sweep_field_named(self):
        spec = builtin_spec("fig4-rician-sweep")
        spec.sweep_param = "bogus"
        errors, _ = validate_spec(spec)
        assert any("bogus" in e for e in errors)

    def test_empty_sweep_rejected(self):
        spec = builtin_spec("fig4-rician-sweep")
        spec.sweep_values = []
        errors, _ = validate_spec(spec)
        assert any("empty" in e for e in errors)
        with pytest.raises(ConfigError):
            run_experiment(spec)

    def test_non_square_sweep_value_rejected(self):
        spec = builtin_spec("fig7-antennas")
        spec.sweep_values = [16, 60]
        errors, _ = validate_spec(spec)
        assert any("perfect square" in e for e in errors)

    def test_unknown_builtin(self):
        with pytest.raises(ConfigError, match="unknown builtin"):
            builtin_spec("fig99-nope")


class TestBuiltins:
    def test_expected_names(self):
        assert builtin_names() == sorted(
            [
                "fig3-moments",
                "fig4-rician-sweep",
                "fig5-pathloss-sweep",
                "fig6-condition",
                "fig7-antennas",
                "fig8-power-scaling",
                "fig9-users",
                "fig10-discrete",
            ]
        )

    def test_desk_and_paper_scales(self):
        desk = builtin_spec("fig3-moments", scale="desk")
        paper = builtin_spec("fig3-moments", scale="paper")
        assert len(desk.sweep_values) < len(paper.sweep_values)
        assert desk.mc.samples < paper.mc.samples


def _tiny_fig3_spec(tmp_path, seed=1) -> ExperimentSpec:
    spec = builtin_spec("fig3-moments", scale="desk", seed=seed, output_dir=tmp_path)
    spec.sweep_values = [4, 16]
    spec.mc = McSettings(samples=400)
    return spec


class TestRunExperiment:
    def test_csv_and_sidecar_written(self, tmp_path):
        path = run_experiment(_tiny_fig3_spec(tmp_path))
        assert path.exists()
        meta = json.loads((tmp_path / "fig3-moments.meta.json").read_text())
        assert meta["seed"] == 1
        assert meta["rows"] > 0
        assert "version" in meta and "wall_time_s" in meta
        header = path.read_text().splitlines()[0]
        assert header == "experiment,sweep_param,sweep_value,metric,unit,value,std_error,samples"

    def test_rerun_reproduces_csv_bytes(self, tmp_path):
        p1 = run_experiment(_tiny_fig3_spec(tmp_path / "a"))
        p2 = run_experiment(_tiny_fig3_spec(tmp_path / "b"))
        assert p1.read_bytes() == p2.read_bytes()

    def test_schema_is_function_of_name_only(self, tmp_path):
        p1 = run_experiment(_tiny_fig3_spec(tmp_path / "a", seed=1))
        p2 = run_experiment(_tiny_fig3_spec(tmp_path / "b", seed=2))
        metrics1 = {line.split(",")[3] for line in p1.read_text().splitlines()[1:]}
        metrics2 = {line.split(",")[3] for line in p2.read_text().splitlines()[1:]}
        assert metrics1 == metrics2

    def test_generic_spec_from_toml(self, tmp_path):
        doc = """
name = "custom-delta"
seed = 2
output = "{out}"

[scenario.geometry]
count = 2
M = 16
N = 4

[sweep]
param = "delta"
values = [0.5, 2.0]

[mc]
samples = 300
phase_draws = 8
samples_per_draw = 10
condition = true
condition_samples = 60

[ga]
population = 20
elites = 2
crossover_pairs = 14
mutation_parents = 4
max_generations = 25
""".format(out=tmp_path.as_posix())
        f = tmp_path / "spec.toml"
        f.write_text(doc)
        spec = load_spec(f)
        assert spec.name == "custom-delta"
        assert spec.ga.population == 20
        path = run_experiment(spec)
        lines = path.read_text().splitlines()
        metrics = {line.split(",")[3] for line in lines[1:]}
        # the generic metric set: optimized both ways, random, aligned
        for want in (
            "sum_rate_max_sum_cf",
            "min_rate_max_min_cf",
            "sum_rate_random_cf",
            "min_rate_aligned_mc",
            "cond_random_mc",
        ):
            assert want in metrics

    def test_missing_spec_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_spec("/nonexistent/spec.toml")

    def test_builtin_reference_spec(self, tmp_path):
        f = tmp_path / "b.json"
        f.write_text(json.dumps({"builtin": "fig6-condition", "seed": 3, "scale": "desk"}))
        spec = load_spec(f)
        assert spec.builtin == "fig6-condition"
        assert spec.seed == 3

    def test_beta_exponent_sweep_rescales_beta(self, tmp_path):
        spec = builtin_spec("fig5-pathloss-sweep", scale="desk", output_dir=tmp_path)
        from rismimo.experiments import _apply_sweep

        scn2, _ = _apply_sweep(spec, 2.0)
        scn3, _ = _apply_sweep(spec, 3.0)
        d0 = spec.geometry.ris_bs_distance
        assert scn2.beta == pytest.approx(path_loss(d0, 2.0))
        assert scn3.beta == pytest.approx(path_loss(d0, 3.0))

    def test_k_sweep_slices_users(self):
        spec = builtin_spec("fig9-users", scale="desk")
        from rismimo.experiments import _apply_sweep

        scn2, _ = _apply_sweep(spec, 2)
        assert scn2.K == 2
        assert scn2.user_angles == spec.scenario.user_angles[:2]

    def test_ga_field_sweep(self):
        from rismimo.experiments import _apply_sweep

        spec = builtin_spec("fig4-rician-sweep", scale="desk")
        spec.sweep_param = "mutation_prob"
        _, ga = _apply_sweep(spec, 0.25)
        assert ga.mutation_prob == 0.25
        # changing the population alone breaks the partition invariant
        spec.sweep_param = "population"
        with pytest.raises(ConfigError, match="population"):
            _apply_sweep(spec, 123)


def _read_metric(path, metric):
    rows = {}
    for line in path.read_text().splitlines()[1:]:
        parts = line.split(",")
        if parts[3] == metric:
            rows[float(parts[2])] = (float(parts[5]), parts[6])
    return rows


class TestBuiltinContent:
    def test_fig3_columns_agree_within_four_se(self, tmp_path):
        spec = builtin_spec("fig3-moments", scale="desk", seed=2, output_dir=tmp_path)
        spec.sweep_values = [16]
        spec.mc = McSettings(samples=4_000)
        path = run_experiment(spec)
        for j in (1, 2):
            for base in (f"signal_phi{j}", f"interf_phi{j}"):
                cf = _read_metric(path, f"{base}_cf")[16.0][0]
                mc_val, mc_se = _read_metric(path, f"{base}_mc")[16.0]
                assert abs(cf - mc_val) < 4 * float(mc_se), base

    def test_fig8_min_rate_flattens(self, tmp_path):
        spec = builtin_spec("fig8-power-scaling", scale="desk", seed=2, output_dir=tmp_path)
        spec.sweep_values = [64, 256]
        spec.mc = McSettings(samples=400, phase_draws=20)
        path = run_experiment(spec)
        rates = _read_metric(path, "min_rate_max_min_n64_cf")
        limits = _read_metric(path, "min_rate_limit_n64_cf")
        # power drops 4x between the points yet the rate holds its level
        assert rates[256.0][0] > 0.5 * rates[64.0][0]
        assert all(v[0] > 0 for v in limits.values())
