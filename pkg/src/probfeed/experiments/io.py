"""Deterministic CSV/JSON artifact writers.

Every file begins with a ``#``-prefixed metadata block (tool version, config
hash, master seed) followed by a stable header row.  Formatting is
timestamp-free and uses shortest round-trip float repr, so identical configs
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

__all__ = ["config_hash", "write_csv", "write_json", "read_csv"]


def config_hash(config: Mapping) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _prepare(path: Union[str, Path], force: bool) -> Path:
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"refusing to overwrite {path}; pass force to allow")
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(
    path: Union[str, Path],
    columns: Sequence[str],
    rows: Iterable[Sequence],
    metadata: Mapping,
    force: bool = False,
) -> Path:
    path = _prepare(path, force)
    lines = [f"# {key}: {_format(value)}" for key, value in metadata.items()]
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("row width does not match the declared columns")
        lines.append(",".join(_format(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path: Union[str, Path], payload: Mapping, force: bool = False) -> Path:
    path = _prepare(path, force)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def read_csv(path: Union[str, Path]):
    """Parse a CSV written by :func:`write_csv`; returns (metadata, columns, rows)."""
    metadata = {}
    columns = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line:
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
        raise ValueError(f"{path} contains no header row")
    return metadata, columns, rows
