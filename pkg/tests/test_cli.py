"""CLI contract: exit codes, artifact schemas, determinism, round trips."""

import json
from pathlib import Path

import pytest

from probfeed.cli import main
from probfeed.experiments import read_csv


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_config(tmp_path, horizon=300, replicates=20):
    return write_config(
        tmp_path,
        "run.json",
        {
            "algorithm": "bbpull_ucb",
            "replicates": replicates,
            "master_seed": 11,
            "instance": {
                "arms": 2,
                "horizon": horizon,
                "feedback_probs": [0.5, 1.0],
                "loss_models": [
                    {"kind": "gaussian", "mean": 0.7, "stddev": 0.1},
                    {"kind": "gaussian", "mean": 0.2, "stddev": 0.1},
                ],
            },
        },
    )


class TestRunCommand:
    def test_writes_csv_and_json(self, tmp_path):
        config = run_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        meta, columns, rows = read_csv(out / "run.csv")
        assert columns == ["algorithm", "arm", "f", "apc_mean", "apc_se", "foc_mean", "foc_se"]
        assert len(rows) == 2
        assert meta["master_seed"] == "11"
        payload = json.loads((out / "run.json").read_text())
        assert payload["config"]["algorithm"] == "bbpull_ucb"

    def test_refuses_overwrite_without_force(self, tmp_path):
        config = run_config(tmp_path)
        out = tmp_path / "out"
        argv = ["run", "--config", config, "--out-dir", str(out), "--jobs", "1"]
        assert main(argv) == 0
        assert main(argv) == 3
        assert main(argv + ["--force"]) == 0

    def test_rerun_is_byte_identical(self, tmp_path):
        config = run_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", config, "--out-dir", str(out_a), "--jobs", "1"])
        main(["run", "--config", config, "--out-dir", str(out_b), "--jobs", "1"])
        assert (out_a / "run.csv").read_bytes() == (out_b / "run.csv").read_bytes()
        assert (out_a / "run.json").read_bytes() == (out_b / "run.json").read_bytes()

    def test_parallel_workers_do_not_change_output(self, tmp_path):
        config = run_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", config, "--out-dir", str(out_a), "--jobs", "1"])
        main(["run", "--config", config, "--out-dir", str(out_b), "--jobs", "3"])
        assert (out_a / "run.csv").read_bytes() == (out_b / "run.csv").read_bytes()

    def test_seed_override_changes_output(self, tmp_path):
        config = run_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", config, "--out-dir", str(out_a), "--jobs", "1"])
        main(["run", "--config", config, "--out-dir", str(out_b), "--seed", "99", "--jobs", "1"])
        assert (out_a / "run.csv").read_bytes() != (out_b / "run.csv").read_bytes()

    def test_config_round_trip(self, tmp_path):
        config = run_config(tmp_path)
        out = tmp_path / "out"
        main(["run", "--config", config, "--out-dir", str(out), "--jobs", "1"])
        payload = json.loads((out / "run.json").read_text())
        original = json.loads(Path(config).read_text())
        assert payload["config"] == original


class TestErrorPaths:
    def test_missing_config_names_path(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.json")
        assert main(["run", "--config", missing, "--jobs", "1"]) == 2
        assert "nope.json" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["run", "--config", str(path), "--jobs", "1"]) == 2

    def test_missing_field_named(self, tmp_path, capsys):
        config = write_config(tmp_path, "c.json", {"master_seed": 1})
        assert main(["run", "--config", config, "--jobs", "1"]) == 2
        assert "instance" in capsys.readouterr().err

    def test_incompatible_algorithm_rejected(self, tmp_path, capsys):
        config = write_config(
            tmp_path,
            "c.json",
            {
                "algorithm": "bbpull_ucb",
                "master_seed": 1,
                "instance": {
                    "arms": 1,
                    "horizon": 4,
                    "feedback_probs": [0.5],
                    "loss_models": [{"kind": "adversarial", "tape": [0.1, 0.2, 0.3, 0.4]}],
                },
            },
        )
        assert main(["run", "--config", config, "--jobs", "1"]) == 2
        assert "stochastic" in capsys.readouterr().err


class TestExperimentCommands:
    def test_monotonicity_smoke(self, tmp_path):
        config = write_config(
            tmp_path,
            "m.json",
            {
                "algorithm": "bbpull_ucb",
                "arm": 1,
                "f_grid": [0.4, 0.8],
                "replicates": 30,
                "master_seed": 5,
                "instance": {
                    "arms": 2,
                    "horizon": 400,
                    "feedback_probs": [1.0, 0.4],
                    "loss_models": [
                        {"kind": "gaussian", "mean": 0.1, "stddev": 0.1},
                        {"kind": "gaussian", "mean": 0.9, "stddev": 0.1},
                    ],
                },
            },
        )
        out = tmp_path / "out"
        assert main(["monotonicity", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        _, columns, rows = read_csv(out / "monotonicity.csv")
        assert columns == ["algorithm", "arm", "f", "measure", "mean", "se", "replicates"]
        assert len(rows) == 4  # two grid points x two measures
        payload = json.loads((out / "monotonicity.json").read_text())
        assert set(payload["verdicts"]) == {"APC", "FOC"}

    def test_correlate_smoke(self, tmp_path):
        config = write_config(
            tmp_path,
            "c.json",
            {
                "master_seed": 3,
                "instances": 3,
                "generator": {"num_arms": 12, "horizon": 150},
                "algorithms": ["bbpull_ucb", "three_phase_exp3_simplified"],
            },
        )
        out = tmp_path / "out"
        assert main(["correlate", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        _, columns, rows = read_csv(out / "correlation.csv")
        assert columns == ["algorithm", "instance_id", "pearson_apc", "pearson_foc"]
        assert len(rows) == 6
        _, arm_cols, arm_rows = read_csv(out / "correlation_arms.csv")
        assert arm_cols == ["algorithm", "instance_id", "arm", "f", "apc", "foc", "utility"]
        assert len(arm_rows) == 6 * 12

    def test_regret_smoke(self, tmp_path):
        config = write_config(
            tmp_path,
            "r.json",
            {
                "algorithm": "bbpull_aae",
                "horizons": [200, 400],
                "replicates": 10,
                "master_seed": 5,
                "instance": {
                    "arms": 2,
                    "horizon": 200,
                    "feedback_probs": [0.5, 0.5],
                    "loss_models": [
                        {"kind": "gaussian", "mean": 0.75, "stddev": 0.1},
                        {"kind": "gaussian", "mean": 0.25, "stddev": 0.1},
                    ],
                },
            },
        )
        out = tmp_path / "out"
        assert main(["regret", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        _, columns, rows = read_csv(out / "regret.csv")
        assert columns == ["algorithm", "horizon", "regret_mean", "regret_se"]
        assert len(rows) == 2

    def test_fig1_smoke_without_config(self, tmp_path):
        out = tmp_path / "out"
        config = write_config(
            tmp_path, "f.json", {"master_seed": 2, "replicates": 5, "horizon": 120, "f_grid": [0.2, 1.0]}
        )
        assert main(["fig1", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        _, columns, rows = read_csv(out / "fig1.csv")
        assert columns == ["instance", "f", "apc_mean", "apc_se"]
        assert len(rows) == 4

    def test_prop3_smoke(self, tmp_path):
        out = tmp_path / "out"
        config = write_config(
            tmp_path, "p.json", {"master_seed": 2, "replicates": 3, "horizons": [300, 600]}
        )
        assert main(["prop3", "--config", config, "--out-dir", str(out), "--jobs", "1"]) == 0
        _, columns, rows = read_csv(out / "prop3.csv")
        assert columns == ["instance", "horizon", "regret_per_round", "regret_per_round_se"]
        assert len(rows) == 4

    def test_oracle_check_and_negative_control(self, tmp_path):
        base = {
            "algorithm": "bbpull_ucb",
            "replicates": 400,
            "master_seed": 9,
            "instance": {
                "arms": 2,
                "horizon": 200,
                "feedback_probs": [0.5, 0.9],
                "loss_models": [
                    {"kind": "gaussian", "mean": 0.3, "stddev": 0.1},
                    {"kind": "gaussian", "mean": 0.6, "stddev": 0.1},
                ],
            },
        }
        good = write_config(tmp_path, "g.json", base)
        out = tmp_path / "out"
        assert main(["oracle-check", "--config", good, "--out-dir", str(out), "--jobs", "1"]) == 0
        bad = write_config(
            tmp_path, "b.json", {**base, "feedback_probs_override": [0.1, 0.9]}
        )
        out2 = tmp_path / "out2"
        assert main(["oracle-check", "--config", bad, "--out-dir", str(out2), "--jobs", "1"]) == 3
