"""Acceptance suite: one test per acceptance criterion, one PASS/FAIL line each.

All checks are statistical at desk scale with 3-standard-error rules; every
tolerance is pinned here.  Two criteria are known to be unattainable at the
pinned design constants (see README, "Known statistical edge cases"): the
correlation-table bands for the observation-budgeted runners and the second
doubling ratio of the elimination regret shape.  They are implemented
faithfully and left to fail rather than loosened.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines on success as well.
"""

import math
import time

import numpy as np
import pytest

from probfeed.cli import main as cli_main
from probfeed.core import GaussianLoss, InstanceSpec, TapeSet, make_instance
from probfeed.experiments import (
    GeneratorSpec,
    baseline_instance,
    correlation_study,
    linear_regret_demo,
    monotonicity_sweep,
    oracle_equivalence,
    paired_difference,
    regret_sweep,
    run_replicates,
    two_instance_curve_study,
)
from probfeed.metrics import compute_apc_foc
from probfeed.transforms import ALGORITHM_IDS


def gauss_inst(f, means, T, sd=0.1):
    return make_instance(
        InstanceSpec(len(means), T, tuple(f), tuple(GaussianLoss(m, sd) for m in means))
    )


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


# ---------------------------------------------------------------------------
# Criterion 1: observation counts track rate x pull counts for every
# implemented algorithm (fixed instance, K=5, T=2000, 2000 replicates).
# ---------------------------------------------------------------------------

def test_rate_identity_every_algorithm():
    """Every public algorithm id, per arm: |FOC - f*APC| within 3 combined SE.

    The simulated oracles satisfy the same identity (they are
    distributionally equal to the real pull transform, whose per-round
    feedback draws are independent of history) but are test apparatus, not
    user-facing algorithms; they are validated by the dedicated oracle
    equivalence criterion instead of being folded into this one.
    """
    instance = gauss_inst(
        (0.37, 0.52, 0.68, 0.81, 0.95),
        (0.15, 0.35, 0.55, 0.70, 0.85),
        2000,
    )
    f = instance.feedback_probs
    reps = 2000
    failures = []
    for algorithm in ALGORITHM_IDS:
        params = {"f_star": 0.3} if ("divide" in algorithm or "bbda" in algorithm) else {}
        t0 = time.perf_counter()
        apc, foc, _ = run_replicates(algorithm, instance, 101, reps, params)
        diffs = foc - f * apc
        mean = diffs.mean(axis=0)
        se = diffs.std(axis=0, ddof=1) / math.sqrt(reps)
        z = np.abs(mean) / np.maximum(se, 1e-300)
        if (np.abs(mean) > 3 * se + 1e-12).any():
            failures.append((algorithm, mean.tolist(), (3 * se).tolist()))
        print(
            f"    {algorithm}: max |z| {z.max():.2f}"
            f" (worst diff {mean[np.argmax(z)]:+.3f}) ({time.perf_counter() - t0:.1f}s)"
        )
    ok = report(
        "rate-identity",
        not failures,
        f"{len(ALGORITHM_IDS)} algorithms, |FOC - f*APC| <= 3SE per arm",
    )
    assert ok, f"identity violated: {failures}"


# ---------------------------------------------------------------------------
# Criteria 2-4: fixed-block, pull, and size-adjusted transforms around the
# confidence-bound algorithm (K=3, T=5000, R=2000, coupled tapes).
# ---------------------------------------------------------------------------

def _ucb_sweep(algorithm, params):
    instance = gauss_inst((0.9, 0.5, 0.7), (0.2, 0.6, 0.4), 5000)
    return monotonicity_sweep(
        algorithm, instance, arm=1, f_grid=[0.4, 0.8], master_seed=202,
        replicates=2000, params=params,
    )


def test_divide_transform_balance_and_foc():
    T = 5000
    res = _ucb_sweep("bbdivide_ucb", {"f_star": 0.3})
    da, sa = paired_difference(res, 0.4, 0.8, "APC")
    df, sf = paired_difference(res, 0.4, 0.8, "FOC")
    apc_ok = abs(da) <= 1.0 / T + 3 * sa
    foc_ok = df > 3 * sf
    ok = report(
        "divide-balance",
        apc_ok and foc_ok,
        f"|dAPC|={abs(da):.3f} <= 1/T+3SE={1/T + 3*sa:.3f}; dFOC={df:.1f} > 3SE={3*sf:.2f}",
    )
    assert ok


def test_pull_transform_directions():
    res = _ucb_sweep("bbpull_ucb", {})
    da, sa = paired_difference(res, 0.4, 0.8, "APC")
    df, sf = paired_difference(res, 0.4, 0.8, "FOC")
    apc_ok = da <= 3 * sa  # non-increasing
    foc_ok = df >= -3 * sf  # non-decreasing
    ok = report(
        "pull-directions",
        apc_ok and foc_ok,
        f"dAPC={da:.1f} <= 3SE={3*sa:.2f}; dFOC={df:.2f} >= -3SE={-3*sf:.2f}",
    )
    assert ok


def test_size_adjusted_transform_directions():
    T = 5000
    res = _ucb_sweep("bbda_ucb", {"f_star": 0.3})
    da, sa = paired_difference(res, 0.4, 0.8, "APC")
    df, sf = paired_difference(res, 0.4, 0.8, "FOC")
    apc_ok = da >= -1.0 / T - 3 * sa
    foc_ok = df > 3 * sf
    ok = report(
        "size-adjusted-directions",
        apc_ok and foc_ok,
        f"dAPC={da:.1f} >= -(1/T)-3SE={-1/T - 3*sa:.3f}; dFOC={df:.1f} > 3SE={3*sf:.2f}",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 5: pull+elimination on a suboptimal arm (gap 0.8, T=20000):
# observation counts balanced, pull counts strictly decreasing.
# ---------------------------------------------------------------------------

def test_pull_elimination_suboptimal_arm():
    T = 20_000
    instance = gauss_inst((1.0, 0.4), (0.1, 0.9), T)
    res = monotonicity_sweep(
        "bbpull_aae", instance, arm=1, f_grid=[0.4, 0.8], master_seed=303,
        replicates=2000,
    )
    da, sa = paired_difference(res, 0.4, 0.8, "APC")
    df, sf = paired_difference(res, 0.4, 0.8, "FOC")
    foc_ok = abs(df) <= 1.0 / T + 3 * sf
    apc_ok = da < -3 * sa
    ok = report(
        "pull-elimination-suboptimal",
        foc_ok and apc_ok,
        f"|dFOC|={abs(df):.4f} <= 1/T+3SE={1/T + 3*sf:.4f}; dAPC={da:.1f} < -3SE={-3*sa:.2f}",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 6: size-adjusted+elimination on a suboptimal arm: both measures
# strictly increasing.  The horizon is chosen so that it expires inside the
# optimal arm's phase service, after the suboptimal arm's allocation is in.
# ---------------------------------------------------------------------------

def test_size_adjusted_elimination_suboptimal_arm():
    instance = gauss_inst((1.0, 0.4), (0.1, 0.9), 30_000)
    res = monotonicity_sweep(
        "bbda_aae", instance, arm=1, f_grid=[0.4, 0.8], master_seed=404,
        replicates=500, params={"f_star": 0.4},
    )
    da, sa = paired_difference(res, 0.4, 0.8, "APC")
    df, sf = paired_difference(res, 0.4, 0.8, "FOC")
    ok = report(
        "size-adjusted-elimination-suboptimal",
        da > 3 * sa and df > 3 * sf,
        f"dAPC={da:.1f} > 3SE={3*sa:.2f}; dFOC={df:.1f} > 3SE={3*sf:.2f}",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 7: correlation table reproduction (100 random instances,
# K=100, T=1000, single run per instance per algorithm).
# ---------------------------------------------------------------------------

TABLE_BANDS = {
    "bbpull_ucb": {"apc": -0.33, "foc": 0.43, "apc_range": (-0.51, -0.16), "foc_range": (0.22, 0.59)},
    "three_phase_exp3_simplified": {"apc": -0.23, "foc": 0.72, "apc_range": (-0.41, 0.03), "foc_range": (0.49, 0.86)},
    "bbpull_aae": {"apc": -0.33, "foc": 0.74, "apc_range": (-0.53, -0.11), "foc_range": (0.54, 0.88)},
}


def _ranges_overlap(a, b):
    return a[0] <= b[1] and b[0] <= a[1]


def test_correlation_table():
    result = correlation_study(
        GeneratorSpec(), 100, list(TABLE_BANDS), master_seed=2024, keep_arm_rows=False
    )
    summary = result.summary()
    failures = []
    for alg, bands in TABLE_BANDS.items():
        s = summary[alg]
        checks = {
            "apc_mean": abs(s["apc_mean"] - bands["apc"]) <= 0.10,
            "foc_mean": abs(s["foc_mean"] - bands["foc"]) <= 0.10,
            "apc_range": _ranges_overlap((s["apc_min"], s["apc_max"]), bands["apc_range"]),
            "foc_range": _ranges_overlap((s["foc_min"], s["foc_max"]), bands["foc_range"]),
        }
        print(
            f"    {alg}: APC {s['apc_mean']:+.3f} (target {bands['apc']:+.2f}+-0.10)"
            f" FOC {s['foc_mean']:+.3f} (target {bands['foc']:+.2f}+-0.10)"
            f" -> {checks}"
        )
        failures.extend(f"{alg}:{k}" for k, v in checks.items() if not v)
    ok = report(
        "correlation-table",
        not failures,
        "means within +-0.10 and ranges overlapping" if not failures else f"out of band: {failures}",
    )
    assert ok, (
        "correlation table bands missed: "
        f"{failures}. The observation-budgeted runners cannot correlate FOC "
        "with the feedback rate at K=100, T=1000 under the pinned phase "
        "quota (see the README section on known edge cases)."
    )


# ---------------------------------------------------------------------------
# Criterion 8: two-instance pull-count curves (simplified three-phase
# runner, K=2, T=1000, R=500 per grid point).
# ---------------------------------------------------------------------------

def test_two_instance_curves():
    res = two_instance_curve_study(master_seed=505, replicates=500)
    rho1, rho2 = res.spearman[1], res.spearman[2]
    ok = report(
        "two-instance-curves",
        rho1 < -0.5 and rho2 > 0.5,
        f"spearman instance1={rho1:.3f} < -0.5; instance2={rho2:.3f} > 0.5",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 9: uncorrected-baseline linear regret (rates 1/4 vs 1) and its
# certain-feedback twin.
# ---------------------------------------------------------------------------

def test_uncorrected_baseline_linear_regret():
    demo = linear_regret_demo([10_000, 100_000], master_seed=606, replicates=16)
    v4, v5 = demo.per_round[10_000], demo.per_round[100_000]
    twin = demo.twin_per_round[100_000]
    checks = v5 >= 0.05 and v5 >= 0.8 * v4 and twin < 0.02
    ok = report(
        "uncorrected-baseline",
        checks,
        f"regret/T@1e5={v5:.4f} >= 0.05; ratio to 1e4 {v5 / v4:.3f} >= 0.8; twin {twin:.4f} < 0.02",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 10: regret growth shape of pull+elimination (gap 0.5,
# rates 0.5/0.5) versus the linear baseline.
# ---------------------------------------------------------------------------

def test_regret_growth_shape():
    def family(h):
        return gauss_inst((0.5, 0.5), (0.25, 0.75), h)

    sweep = regret_sweep(
        "bbpull_aae", family, [5000, 10_000, 20_000], master_seed=707, replicates=500
    )
    ratios = sweep.doubling_ratios()
    base = regret_sweep(
        "exp3_standard", baseline_instance, [10_000, 20_000], master_seed=708, replicates=100
    )
    base_ratio = base.doubling_ratios()[10_000]
    shape_ok = ratios[5000] < 1.6 and ratios[10_000] < 1.6
    base_ok = 1.7 <= base_ratio <= 2.4
    ok = report(
        "regret-growth-shape",
        shape_ok and base_ok,
        f"ratios {ratios[5000]:.3f}, {ratios[10_000]:.3f} < 1.6; baseline {base_ratio:.3f} ~ 2",
    )
    assert ok, (
        f"doubling ratios {ratios} (want < 1.6), baseline {base_ratio:.3f}. "
        "The gap 0.5 sits exactly on the phase-2 elimination boundary "
        "2*2^-2, making elimination a coin flip there (see README)."
    )


# ---------------------------------------------------------------------------
# Criterion 11: simulated-oracle equivalence for the pull transform
# (K=3, T=500, R=5000) plus a negative control.
# ---------------------------------------------------------------------------

def test_oracle_equivalence_and_negative_control():
    instance = gauss_inst((0.4, 0.7, 1.0), (0.2, 0.5, 0.8), 500)
    good = oracle_equivalence("bbpull_ucb", instance, 809, replicates=5000)
    bad = oracle_equivalence(
        "bbpull_ucb", instance, 809, replicates=5000,
        feedback_probs_override=[0.15, 0.7, 1.0],
    )
    worst = max(abs(r[5]) / r[6] for r in good.rows)
    ok = report(
        "oracle-equivalence",
        good.all_within_bound and not bad.all_within_bound,
        f"max |diff|/bound = {worst:.2f} <= 1; negative control fails as required",
    )
    assert ok


# ---------------------------------------------------------------------------
# Criterion 12: moments of the rounds-for-one-observation estimate
# (10^4 replicates at rates 0.1, 0.5, 1.0).
# ---------------------------------------------------------------------------

def test_estimation_moments():
    tapes = TapeSet(910)
    reps = 10_000
    failures = []
    details = []
    for slot, f in enumerate((0.1, 0.5, 1.0)):
        window = max(1, math.ceil(40 / f))
        u = tapes.uniforms(70, slot, 0, 0, reps * window).reshape(reps, window)
        hits = u < f
        assert hits.any(axis=1).all(), "window too short for the scan"
        p_e = hits.argmax(axis=1) + 1.0
        mean = p_e.mean()
        se = p_e.std(ddof=1) / math.sqrt(reps)
        sq = p_e**2
        sq_mean = sq.mean()
        sq_se = sq.std(ddof=1) / math.sqrt(reps)
        first_ok = abs(mean - 1.0 / f) <= 3 * se
        second_ok = sq_mean <= 2.0 / f**2 + 3 * sq_se
        if not (first_ok and second_ok):
            failures.append(f)
        details.append(f"f={f}: E={mean:.3f} (1/f={1/f:.1f}), E2={sq_mean:.2f} <= {2/f**2:.2f}+3SE")
    ok = report("estimation-moments", not failures, "; ".join(details))
    assert ok


# ---------------------------------------------------------------------------
# Criterion 13: byte-identical experiment reruns.
# ---------------------------------------------------------------------------

def test_byte_identical_reruns(tmp_path):
    import json

    config = tmp_path / "fig1.json"
    config.write_text(
        json.dumps({"master_seed": 42, "replicates": 8, "horizon": 150, "f_grid": [0.3, 1.0]})
    )
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code = cli_main(
            ["fig1", "--config", str(config), "--out-dir", str(out), "--jobs", "1"]
        )
        assert code == 0
        outs.append((out / "fig1.csv").read_bytes())
    ok = report("determinism", outs[0] == outs[1], "rerun produced byte-identical CSV")
    assert ok
