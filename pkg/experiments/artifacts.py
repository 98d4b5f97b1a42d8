"""experiments/artifacts.py — CSV, JSON metadata and SVG outputs of a run.

Outputs are deterministic: numbers are written with 10 significant digits,
JSON keys are sorted and no timestamps are recorded, and SVG files carry a
fixed hash salt and no creation date.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from estimators.base import Estimator  # noqa: E402
from estimators.serialization import to_json  # noqa: E402

logger = logging.getLogger(__name__)

CODE_VERSION = "0.1.0"


@dataclass
class PlotSpec:
    """How to draw a result table as line plots.

    One polyline per ``y`` column, repeated for every distinct value of
    ``group_by`` when given.
    """

    x: str
    y: List[str]
    group_by: Optional[str] = None
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    log_y: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.10g}"
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
            writer.writerow([format_value(v) for v in row])
    logger.info("Wrote %s (%d rows)", path, len(rows))
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def write_metadata(path: Path, metadata: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = dict(metadata)
    doc.setdefault("code_version", CODE_VERSION)
    path.write_text(
        json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n",
        encoding="utf-8",
    )
    return path


def write_estimator(path: Path, estimator: Estimator) -> Path:
    """Estimator JSON document, reloadable with :func:`estimators.serialization.from_json`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(estimator) + "\n", encoding="utf-8")
    logger.info("Wrote %s (%s, D=%d)", path, estimator.name, estimator.dimension)
    return path


def write_plot(
    path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]], spec: PlotSpec
) -> Path:
    """Render *rows* as an SVG line plot."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    col = {name: i for i, name in enumerate(header)}
    missing = [c for c in [spec.x, *spec.y, spec.group_by] if c and c not in col]
    if missing:
        raise ValueError(f"plot columns not in table: {missing}")

    groups: Dict[Any, List[Sequence[Any]]] = {}
    for row in rows:
        key = row[col[spec.group_by]] if spec.group_by else None
        groups.setdefault(key, []).append(row)

    plt.rcParams["svg.hashsalt"] = "chanest"
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        for key, group in groups.items():
            xs = np.array([float(r[col[spec.x]]) for r in group])
            for name in spec.y:
                ys = np.array([np.nan if r[col[name]] is None else float(r[col[name]]) for r in group])
                label = name if key is None else f"{name} ({spec.group_by}={format_value(key)})"
                ax.plot(xs, ys, marker="o", markersize=3, label=label)
        if spec.log_y:
            ax.set_yscale("log")
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize="small")
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info("Wrote %s", path)
    return path
