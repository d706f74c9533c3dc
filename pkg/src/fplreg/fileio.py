"""File formats: curve CSVs, dataset manifests, model files, result tables.

All floating point output uses the shortest decimal representation that
round-trips, so serialize-then-parse is the identity on values and
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidConfig
from .fplm import FittedModel
from .funcspace import Curve, FunctionalDataset, Grid
from .kernelreg import KernelSpec
from .simstudy import BenchmarkTable, TruthBundle

__all__ = [
    "write_curves_csv",
    "read_curves_csv",
    "write_manifest",
    "load_dataset",
    "save_model",
    "load_model",
    "write_benchmark_csv",
    "write_cv_csv",
]

MODEL_FORMAT_VERSION = 1


def _fmt(v: float) -> str:
    return repr(float(v))


def _grid_from_points(points: np.ndarray) -> Grid:
    if points.size < 2 or np.any(np.diff(points) <= 0):
        raise InvalidConfig("grid row must be strictly ascending with >= 2 points")
    grid = Grid(float(points[0]), float(points[-1]), int(points.size))
    if not np.allclose(points, grid.points, rtol=0, atol=1e-9 * grid.spacing):
        raise InvalidConfig("grid row is not uniformly spaced")
    return grid


def write_curves_csv(path, curves: Sequence[Curve]) -> None:
    """First row: grid points; each later row: one curve's values."""
    grid = curves[0].grid
    lines = [",".join(_fmt(p) for p in grid.points)]
    for c in curves:
        if c.grid != grid:
            raise InvalidConfig("all curves in one file must share a grid")
        lines.append(",".join(_fmt(v) for v in c.values))
    Path(path).write_text("\n".join(lines) + "\n")


def read_curves_csv(path) -> list[Curve]:
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            try:
                rows.append(np.array([float(tok) for tok in line.split(",")]))
            except ValueError as exc:
                raise InvalidConfig(f"non-numeric value in {path}") from exc
    if len(rows) < 2:
        raise InvalidConfig(f"{path}: need a grid row and at least one curve row")
    widths = {r.size for r in rows}
    if len(widths) != 1:
        raise InvalidConfig(f"{path}: rows have unequal lengths")
    grid = _grid_from_points(rows[0])
    return [Curve(grid, r) for r in rows[1:]]


def write_manifest(
    path,
    x_path: str,
    t_path: str,
    Y: np.ndarray,
    truth: TruthBundle | None = None,
    b_true_path: str | None = None,
) -> None:
    doc = {
        "x_curves": x_path,
        "t_curves": t_path,
        "y": [float(v) for v in Y],
    }
    if truth is not None:
        doc["truth"] = {
            "b_true": b_true_path,
            "g_values": [float(v) for v in truth.g_values],
            "linear_values": [float(v) for v in truth.linear_values],
        }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_dataset(manifest_path) -> tuple[FunctionalDataset, TruthBundle | None]:
    manifest_path = Path(manifest_path)
    try:
        doc = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{manifest_path} is not valid JSON") from exc
    base = manifest_path.parent
    try:
        X = read_curves_csv(base / doc["x_curves"])
        T = read_curves_csv(base / doc["t_curves"])
        Y = np.array([float(v) for v in doc["y"]])
    except KeyError as exc:
        raise InvalidConfig(f"manifest is missing field {exc}") from exc
    if not (len(X) == len(T) == Y.size):
        raise InvalidConfig(
            f"manifest row counts disagree: |X|={len(X)}, |T|={len(T)}, |Y|={Y.size}"
        )
    data = FunctionalDataset(X=X, T=T, Y=Y)
    truth = None
    if "truth" in doc:
        tr = doc["truth"]
        b_true = read_curves_csv(base / tr["b_true"])[0]
        truth = TruthBundle(
            b_true=b_true,
            g_values=np.array(tr["g_values"], dtype=float),
            linear_values=np.array(tr["linear_values"], dtype=float),
        )
        if truth.g_values.size != Y.size or truth.linear_values.size != Y.size:
            raise InvalidConfig("truth block length disagrees with the response")
    return data, truth


def _grid_doc(grid: Grid) -> dict:
    return {"start": grid.start, "end": grid.end, "num_points": grid.num_points}


def _grid_from_doc(doc: dict) -> Grid:
    return Grid(float(doc["start"]), float(doc["end"]), int(doc["num_points"]))


def save_model(path, model: FittedModel) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "grid_x": _grid_doc(model.b_hat.grid),
        "grid_t": _grid_doc(model.T_train[0].grid),
        "b_hat": [float(v) for v in model.b_hat.values],
        "m": model.m,
        "h": model.h,
        "kernel": model.kernel.value,
        "t_train": [[float(v) for v in c.values] for c in model.T_train],
        "partial_residuals": [float(v) for v in model.partial_residuals],
        "coefficients": [float(v) for v in model.coefficients],
        "eigenvalues_used": [float(v) for v in model.eigenvalues_used],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_model(path) -> FittedModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path} is not a valid model file") from exc
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise InvalidConfig(
            f"unsupported model format version {version!r} "
            f"(this build reads version {MODEL_FORMAT_VERSION})"
        )
    grid_x = _grid_from_doc(doc["grid_x"])
    grid_t = _grid_from_doc(doc["grid_t"])
    return FittedModel(
        b_hat=Curve(grid_x, np.array(doc["b_hat"], dtype=float)),
        m=int(doc["m"]),
        h=float(doc["h"]),
        kernel=KernelSpec(doc["kernel"]),
        T_train=[Curve(grid_t, np.array(row, dtype=float)) for row in doc["t_train"]],
        partial_residuals=np.array(doc["partial_residuals"], dtype=float),
        coefficients=np.array(doc["coefficients"], dtype=float),
        eigenvalues_used=np.array(doc["eigenvalues_used"], dtype=float),
    )


def write_benchmark_csv(path, table: BenchmarkTable) -> None:
    lines = ["m,multiplier,mse1,mse2,mse3,completed,missing"]
    for cell in table.cells:
        lines.append(
            ",".join(
                [
                    "" if cell.m is None else str(cell.m),
                    "" if cell.multiplier is None else _fmt(cell.multiplier),
                    "" if cell.mse1 is None else _fmt(cell.mse1),
                    "" if cell.mse2 is None else _fmt(cell.mse2),
                    "" if cell.mse3 is None else _fmt(cell.mse3),
                    str(cell.completed),
                    str(cell.missing),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_cv_csv(path, table: list[tuple[int, float, float]]) -> None:
    lines = ["m,multiplier,cv_error"]
    for m, mult, err in table:
        lines.append(f"{m},{_fmt(mult)},{_fmt(err)}")
    Path(path).write_text("\n".join(lines) + "\n")
