"""Command-line entry point.

Subcommands map one-to-one onto the experiment runners:

* ``run``          -- Monte Carlo summary of one algorithm on one instance
* ``monotonicity`` -- paired sweep of one arm's feedback rate
* ``correlate``    -- random-instance correlation study
* ``regret``       -- regret growth across horizons
* ``fig1``         -- two-instance pull-count curves for the simplified
                      three-phase runner
* ``prop3``        -- uncorrected-baseline linear-regret demonstration
* ``oracle-check`` -- pull transform vs its simulated statistical twin

Configs are JSON files (documented in the README); ``--seed`` overrides the
config's master seed.  Progress goes to stderr, data to files; exit codes:
0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .core.instance import instance_spec_from_dict, instance_spec_to_dict, make_instance
from .experiments import (
    GeneratorSpec,
    config_hash,
    correlation_study,
    linear_regret_demo,
    monotonicity_sweep,
    oracle_equivalence,
    paired_difference,
    regret_sweep,
    replicate_run,
    two_instance_curve_study,
    write_csv,
    write_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

OUTPUT_DIR_ENV = "PROBFEED_OUT"


class ConfigError(ValueError):
    pass


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        config = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"config file {p} must contain a JSON object")
    return config


def _require(config: dict, key: str):
    if key not in config:
        raise ConfigError(f"config is missing required field {key!r}")
    return config[key]


def _instance_from_config(config: dict):
    raw = _require(config, "instance")
    try:
        spec = instance_spec_from_dict(raw)
        return make_instance(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid instance: {exc}") from exc


def _common_metadata(args, config: dict) -> dict:
    return {
        "tool_version": __version__,
        "config_hash": config_hash(config),
        "master_seed": config["master_seed"],
    }


def _finalize_config(args, config: dict) -> dict:
    if args.seed is not None:
        config["master_seed"] = int(args.seed)
    config.setdefault("master_seed", 0)
    return config


def _out_dir(args) -> Path:
    if args.out_dir:
        return Path(args.out_dir)
    env = os.environ.get(OUTPUT_DIR_ENV)
    return Path(env) if env else Path("probfeed-results")


def _summary_payload(args, config: dict, extra: dict) -> dict:
    return {"config": config, "metadata": _common_metadata(args, config), **extra}


def _cmd_run(args) -> int:
    config = _finalize_config(args, _load_config(args.config))
    instance = _instance_from_config(config)
    algorithm = _require(config, "algorithm")
    params = config.get("params", {})
    replicates = int(config.get("replicates", 100))
    summary = replicate_run(
        algorithm, instance, config["master_seed"], replicates, params, jobs=args.jobs
    )
    out = _out_dir(args)
    f = instance.feedback_probs
    rows = [
        (
            algorithm,
            arm,
            float(f[arm]),
            float(summary.apc_mean[arm]),
            float(summary.apc_se[arm]),
            float(summary.foc_mean[arm]),
            float(summary.foc_se[arm]),
        )
        for arm in range(instance.num_arms)
    ]
    write_csv(
        out / "run.csv",
        ["algorithm", "arm", "f", "apc_mean", "apc_se", "foc_mean", "foc_se"],
        rows,
        _common_metadata(args, config),
        force=args.force,
    )
    write_json(
        out / "run.json",
        _summary_payload(
            args,
            config,
            {
                "regret_mean": summary.regret_mean,
                "regret_se": summary.regret_se,
                "replicates": summary.replicates,
            },
        ),
        force=args.force,
    )
    _progress(f"wrote {out / 'run.csv'}")
    return EXIT_OK


def _cmd_monotonicity(args) -> int:
    config = _finalize_config(args, _load_config(args.config))
    instance = _instance_from_config(config)
    algorithm = _require(config, "algorithm")
    arm = int(_require(config, "arm"))
    grid = [float(x) for x in _require(config, "f_grid")]
    replicates = int(config.get("replicates", 2000))
    coupled = config.get("coupling", "coupled") == "coupled"
    result = monotonicity_sweep(
        algorithm,
        instance,
        arm,
        grid,
        config["master_seed"],
        replicates,
        params=config.get("params", {}),
        coupled=coupled,
        tolerance=config.get("tolerance"),
        jobs=args.jobs,
    )
    out = _out_dir(args)
    rows = []
    for measure in ("APC", "FOC"):
        for f, mean, se in result.point_stats(measure):
            rows.append((algorithm, arm, f, measure, mean, se, replicates))
    write_csv(
        out / "monotonicity.csv",
        ["algorithm", "arm", "f", "measure", "mean", "se", "replicates"],
        rows,
        _common_metadata(args, config),
        force=args.force,
    )
    verdicts = {
        m: {
            "label": v.label,
            "tolerance": v.tolerance,
            "grid": v.grid,
            "means": v.means,
            "ses": v.ses,
        }
        for m, v in result.verdicts.items()
    }
    extremes = {
        m: dict(
            zip(("diff_mean", "diff_se"), paired_difference(result, grid[0], grid[-1], m))
        )
        for m in ("APC", "FOC")
    }
    write_json(
        out / "monotonicity.json",
        _summary_payload(
            args, config, {"verdicts": verdicts, "extreme_pair_difference": extremes}
        ),
        force=args.force,
    )
    for measure, verdict in result.verdicts.items():
        _progress(f"{algorithm} arm {arm} {measure}: {verdict.label}")
    return EXIT_OK


def _cmd_correlate(args) -> int:
    config = _finalize_config(args, _load_config(args.config))
    generator = GeneratorSpec.from_dict(config.get("generator", {}))
    algorithms = config.get(
        "algorithms", ["bbpull_ucb", "three_phase_exp3_simplified", "bbpull_aae"]
    )
    num_instances = int(config.get("instances", 100))
    result = correlation_study(
        generator, num_instances, algorithms, config["master_seed"],
        params=config.get("params", {}),
    )
    out = _out_dir(args)
    meta = _common_metadata(args, config)
    write_csv(
        out / "correlation.csv",
        ["algorithm", "instance_id", "pearson_apc", "pearson_foc"],
        result.rows,
        meta,
        force=args.force,
    )
    write_csv(
        out / "correlation_arms.csv",
        ["algorithm", "instance_id", "arm", "f", "apc", "foc", "utility"],
        result.arm_rows,
        meta,
        force=args.force,
    )
    write_json(
        out / "correlation.json",
        _summary_payload(
            args,
            config,
            {
                "summary": result.summary(),
                "generator": generator.to_dict(),
                "raw_ranges": {
                    "bbpull_ucb": "utility means 0-1, noise sd 0.1",
                    "bbpull_aae": "utility means 0-5, noise sd 0.5 (rescaled /5)",
                    "three_phase_exp3_simplified": "loss means -1-0, noise sd 0.1",
                },
            },
        ),
        force=args.force,
    )
    for alg, s in result.summary().items():
        _progress(
            f"{alg}: APC {s['apc_mean']:+.3f} [{s['apc_min']:+.3f},{s['apc_max']:+.3f}]"
            f" FOC {s['foc_mean']:+.3f} [{s['foc_min']:+.3f},{s['foc_max']:+.3f}]"
        )
    return EXIT_OK


def _cmd_regret(args) -> int:
    config = _finalize_config(args, _load_config(args.config))
    instance = _instance_from_config(config)
    algorithm = _require(config, "algorithm")
    horizons = [int(h) for h in _require(config, "horizons")]
    replicates = int(config.get("replicates", 500))
    spec = instance.spec

    def family(h):
        return make_instance(
            instance_spec_from_dict(
                {**instance_spec_to_dict(spec), "horizon": h}
            )
        )

    result = regret_sweep(
        algorithm,
        family,
        horizons,
        config["master_seed"],
        replicates,
        params=config.get("params", {}),
        jobs=args.jobs,
    )
    out = _out_dir(args)
    write_csv(
        out / "regret.csv",
        ["algorithm", "horizon", "regret_mean", "regret_se"],
        result.rows,
        _common_metadata(args, config),
        force=args.force,
    )
    write_json(
        out / "regret.json",
        _summary_payload(
            args,
            config,
            {"doubling_ratios": {str(k): v for k, v in result.doubling_ratios().items()}},
        ),
        force=args.force,
    )
    for h, ratio in result.doubling_ratios().items():
        _progress(f"regret({2 * h})/regret({h}) = {ratio:.3f}")
    return EXIT_OK


def _cmd_fig1(args) -> int:
    config = _finalize_config(args, _load_config(args.config)) if args.config else _finalize_config(args, {})
    result = two_instance_curve_study(
        master_seed=config["master_seed"],
        horizon=int(config.get("horizon", 1000)),
        replicates=int(config.get("replicates", 500)),
        grid=config.get("f_grid"),
        fixed_arm_rate=float(config.get("fixed_arm_rate", 1.0)),
    )
    out = _out_dir(args)
    write_csv(
        out / "fig1.csv",
        ["instance", "f", "apc_mean", "apc_se"],
        result.rows,
        _common_metadata(args, config),
        force=args.force,
    )
    write_json(
        out / "fig1.json",
        _summary_payload(
            args,
            config,
            {
                "spearman": {str(k): v for k, v in result.spearman.items()},
                "fixed_arm_rate": result.fixed_arm_rate,
            },
        ),
        force=args.force,
    )
    _progress(f"spearman by instance: {result.spearman}")
    return EXIT_OK


def _cmd_prop3(args) -> int:
    config = _finalize_config(args, _load_config(args.config)) if args.config else _finalize_config(args, {})
    horizons = [int(h) for h in config.get("horizons", [10_000, 100_000])]
    replicates = int(config.get("replicates", 24))
    demo = linear_regret_demo(horizons, config["master_seed"], replicates, jobs=args.jobs)
    out = _out_dir(args)
    rows = []
    for h in demo.horizons:
        rows.append(("probabilistic", h, demo.per_round[h], demo.per_round_se[h]))
        rows.append(("certain_twin", h, demo.twin_per_round[h], demo.twin_per_round_se[h]))
    write_csv(
        out / "prop3.csv",
        ["instance", "horizon", "regret_per_round", "regret_per_round_se"],
        rows,
        _common_metadata(args, config),
        force=args.force,
    )
    write_json(
        out / "prop3.json",
        _summary_payload(
            args,
            config,
            {
                "per_round": {str(k): v for k, v in demo.per_round.items()},
                "twin_per_round": {str(k): v for k, v in demo.twin_per_round.items()},
            },
        ),
        force=args.force,
    )
    for h in demo.horizons:
        _progress(
            f"T={h}: regret/T={demo.per_round[h]:.4f} (twin {demo.twin_per_round[h]:.4f})"
        )
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    config = _finalize_config(args, _load_config(args.config))
    instance = _instance_from_config(config)
    algorithm = config.get("algorithm", "bbpull_ucb")
    replicates = int(config.get("replicates", 5000))
    comparison = oracle_equivalence(
        algorithm,
        instance,
        config["master_seed"],
        replicates,
        feedback_probs_override=config.get("feedback_probs_override"),
        jobs=args.jobs,
    )
    out = _out_dir(args)
    write_csv(
        out / "oracle_check.csv",
        ["arm", "apc_real", "se_real", "apc_sim", "se_sim", "diff", "bound"],
        comparison.rows,
        _common_metadata(args, config),
        force=args.force,
    )
    write_json(
        out / "oracle_check.json",
        _summary_payload(args, config, {"all_within_bound": comparison.all_within_bound}),
        force=args.force,
    )
    verdict = "within" if comparison.all_within_bound else "OUTSIDE"
    _progress(f"per-arm pull counts {verdict} 3 combined standard errors")
    return EXIT_OK if comparison.all_within_bound else EXIT_RUNTIME


_COMMANDS = {
    "run": (_cmd_run, True),
    "monotonicity": (_cmd_monotonicity, True),
    "correlate": (_cmd_correlate, True),
    "regret": (_cmd_regret, True),
    "fig1": (_cmd_fig1, False),
    "prop3": (_cmd_prop3, False),
    "oracle-check": (_cmd_oracle_check, True),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probfeed",
        description="Bandit simulation with probabilistic feedback: engagement and regret experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, config_required) in _COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument(
            "--config",
            required=config_required,
            help="JSON experiment config" + ("" if config_required else " (optional)"),
        )
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument(
            "--out-dir",
            default=None,
            help=f"output directory (default: ${OUTPUT_DIR_ENV} or ./probfeed-results)",
        )
        p.add_argument(
            "--force", action="store_true", help="overwrite existing result files"
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=os.cpu_count() or 1,
            help="max concurrent replicate workers (default: available cores)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler, _ = _COMMANDS[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        _progress(f"configuration error: {exc}")
        return EXIT_CONFIG
    except FileExistsError as exc:
        _progress(f"refusing to overwrite: {exc}")
        return EXIT_RUNTIME
    except ValueError as exc:
        _progress(f"configuration error: {exc}")
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - defensive
        _progress(f"runtime failure: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
