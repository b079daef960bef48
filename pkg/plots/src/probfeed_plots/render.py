"""Render probfeed CSV artifacts into static figures.

Three figure kinds, matched to the experiment CSV schemas:

* ``monotonicity-curve`` -- per-rate means with 3-SE error bars; accepts
  both the sweep schema (panels per measure) and the two-instance curve
  schema (panels per instance).
* ``correlation-scatter`` -- per-arm rate-vs-count scatter, one panel for
  pull counts and one for observation counts, points shaded by a column
  (arm utility by default; darker is higher).
* ``regret-curve`` -- mean regret against horizon with error bars, one line
  per algorithm.

Rendering is read-only with respect to the inputs and never writes a file
when validation fails.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["SchemaError", "read_artifact", "render", "KINDS"]

KINDS = ("monotonicity-curve", "correlation-scatter", "regret-curve")

_SCHEMAS: Dict[str, Sequence[Sequence[str]]] = {
    "monotonicity-curve": (
        ["algorithm", "arm", "f", "measure", "mean", "se", "replicates"],
        ["instance", "f", "apc_mean", "apc_se"],
    ),
    "correlation-scatter": (
        ["algorithm", "instance_id", "arm", "f", "apc", "foc", "utility"],
    ),
    "regret-curve": (["algorithm", "horizon", "regret_mean", "regret_se"],),
}


class SchemaError(ValueError):
    """Input CSV does not match the declared experiment schema."""


def read_artifact(path) -> tuple:
    """Parse a probfeed CSV: ``#`` metadata lines, header row, data rows."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    metadata = {}
    columns: Optional[List[str]] = None
    rows: List[List[str]] = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            metadata[key.strip()] = value.strip()
            continue
        parts = line.split(",")
        if columns is None:
            columns = parts
        else:
            rows.append(parts)
    if columns is None:
        raise SchemaError(f"{path} has no header row")
    return metadata, columns, rows


def _match_schema(kind: str, columns: List[str]) -> List[str]:
    for candidate in _SCHEMAS[kind]:
        if columns == list(candidate):
            return list(candidate)
    expected = _SCHEMAS[kind][0]
    missing = [c for c in expected if c not in columns]
    raise SchemaError(
        f"columns {columns} do not match any {kind} schema; "
        f"missing from the primary schema: {missing or 'none (order/extras differ)'}"
    )


def _col(rows, columns, name, cast=float):
    idx = columns.index(name)
    return [cast(r[idx]) for r in rows]


def _render_monotonicity(columns, rows, options) -> plt.Figure:
    if columns[0] == "instance":
        group_key, x_key, y_key, se_key = "instance", "f", "apc_mean", "apc_se"
        default_ylabel = "pull count"
        panel_title = "instance {}"
    else:
        group_key, x_key, y_key, se_key = "measure", "f", "mean", "se"
        default_ylabel = "count"
        panel_title = "{}"
    groups = []
    for r in rows:
        g = r[columns.index(group_key)]
        if g not in groups:
            groups.append(g)
    fig, axes = plt.subplots(1, len(groups), figsize=(4.2 * len(groups), 3.4), squeeze=False)
    for ax, group in zip(axes[0], groups):
        sub = [r for r in rows if r[columns.index(group_key)] == group]
        x = np.array(_col(sub, columns, x_key))
        y = np.array(_col(sub, columns, y_key))
        se = np.array(_col(sub, columns, se_key))
        order = np.argsort(x)
        ax.errorbar(
            x[order], y[order], yerr=3 * se[order], marker="o", capsize=3, linewidth=1.2
        )
        ax.set_title(panel_title.format(group))
        ax.set_xlabel(options.get("xlabel", "feedback rate"))
        ax.set_ylabel(options.get("ylabel", default_ylabel))
    fig.tight_layout()
    return fig


def _render_correlation(columns, rows, options) -> plt.Figure:
    algorithm = options.get("algorithm") or rows[0][columns.index("algorithm")]
    instance_id = options.get("instance_id")
    if instance_id is None:
        instance_id = rows[0][columns.index("instance_id")]
    sub = [
        r
        for r in rows
        if r[columns.index("algorithm")] == algorithm
        and r[columns.index("instance_id")] == str(instance_id)
    ]
    if not sub:
        raise SchemaError(
            f"no rows for algorithm={algorithm!r} instance_id={instance_id!r}"
        )
    f = np.array(_col(sub, columns, "f"))
    shade_column = options.get("shade_column", "utility")
    if shade_column not in columns:
        raise SchemaError(f"shading column {shade_column!r} not present in {columns}")
    shade = np.array(_col(sub, columns, shade_column))
    fig, axes = plt.subplots(2, 1, figsize=(4.6, 6.4), sharex=True)
    for ax, key, label in ((axes[0], "apc", "pull count"), (axes[1], "foc", "observation count")):
        y = np.array(_col(sub, columns, key))
        sc = ax.scatter(f, y, c=shade, cmap="Greys", edgecolors="k", linewidths=0.3, s=22)
        ax.set_ylabel(options.get("ylabel", label))
    axes[1].set_xlabel(options.get("xlabel", "feedback rate"))
    axes[0].set_title(f"{algorithm} (instance {instance_id}; darker = higher {shade_column})")
    fig.colorbar(sc, ax=axes, fraction=0.04)
    return fig


def _render_regret(columns, rows, options) -> plt.Figure:
    algorithms = []
    for r in rows:
        a = r[columns.index("algorithm")]
        if a not in algorithms:
            algorithms.append(a)
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    for alg in algorithms:
        sub = [r for r in rows if r[columns.index("algorithm")] == alg]
        h = np.array(_col(sub, columns, "horizon"))
        m = np.array(_col(sub, columns, "regret_mean"))
        se = np.array(_col(sub, columns, "regret_se"))
        order = np.argsort(h)
        ax.errorbar(h[order], m[order], yerr=3 * se[order], marker="o", capsize=3, label=alg)
    ax.set_xlabel(options.get("xlabel", "horizon"))
    ax.set_ylabel(options.get("ylabel", "regret"))
    ax.legend()
    fig.tight_layout()
    return fig


_RENDERERS = {
    "monotonicity-curve": _render_monotonicity,
    "correlation-scatter": _render_correlation,
    "regret-curve": _render_regret,
}


def render(input_path, kind: str, output_path, options: Optional[dict] = None) -> Path:
    """Validate, draw, and write one figure; returns the output path."""
    if kind not in KINDS:
        raise SchemaError(f"unknown figure kind {kind!r}; choose from {KINDS}")
    options = options or {}
    _, columns, rows = read_artifact(input_path)
    columns = _match_schema(kind, columns)
    if not rows:
        raise SchemaError(f"{input_path} contains a header but no data rows")
    fig = _RENDERERS[kind](columns, rows, options)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output_path, dpi=options.get("dpi", 100))
    plt.close(fig)
    return output_path
