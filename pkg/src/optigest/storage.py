"""Persistence formats: versioned CSV files and the JSON model document.

Every CSV starts with a version comment line; readers reject unknown
versions. All numeric fields use fixed formats so re-running a command
overwrites byte-identical output.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .classifier import PoseModel
from .errors import SchemaError
from .features import FeatureSet
from .frames import FrameMeta, Mode, POSE_ORDER, PoseClass, RawDataFrame, SensorGeometry, validate_frame
from .power import PowerReportRow
from .roc import RocPoint

SCHEMA_PREFIX = "# optigest-csv v1"

DATASET_COLUMNS = [
    "v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7",
    "mode", "lux", "phi_deg", "theta_deg", "d_cm", "width_mm", "label",
]


def _header_line(kind: str) -> str:
    return f"{SCHEMA_PREFIX} kind={kind}"


def _check_header(line: str, kind: str, path) -> None:
    if line.strip() != _header_line(kind):
        raise SchemaError(
            f"{path}: expected header {_header_line(kind)!r}, got {line.strip()!r}"
        )


def _fmt(value, spec: str = "{:.4f}") -> str:
    if value is None:
        return ""
    return spec.format(value)


def write_dataset_csv(frames, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        handle.write(_header_line("dataset") + "\n")
        writer = csv.writer(handle)
        writer.writerow(DATASET_COLUMNS)
        for frame in frames:
            meta = frame.meta or FrameMeta()
            row = [f"{v:.4f}" for v in frame.voltages]
            row += [
                frame.mode.value,
                _fmt(meta.lux, "{:.1f}"),
                _fmt(meta.phi_deg, "{:.1f}"),
                _fmt(meta.theta_deg, "{:.1f}"),
                _fmt(meta.distance_cm, "{:.2f}"),
                _fmt(meta.width_mm, "{:.2f}"),
                meta.true_pose.value if meta.true_pose is not None else "",
            ]
            writer.writerow(row)


def read_dataset_csv(path, geometry: SensorGeometry) -> list[RawDataFrame]:
    path = Path(path)
    with path.open("r", newline="") as handle:
        first = handle.readline()
        _check_header(first, "dataset", path)
        reader = csv.DictReader(handle)
        if reader.fieldnames != DATASET_COLUMNS:
            raise SchemaError(f"{path}: unexpected columns {reader.fieldnames}")
        frames = []
        for line_no, row in enumerate(reader, start=3):
            try:
                voltages = [float(row[f"v{i}"]) for i in range(8)]
                mode = Mode(row["mode"])
                meta = FrameMeta(
                    lux=float(row["lux"]) if row["lux"] else None,
                    phi_deg=float(row["phi_deg"]) if row["phi_deg"] else None,
                    theta_deg=float(row["theta_deg"]) if row["theta_deg"] else None,
                    distance_cm=float(row["d_cm"]) if row["d_cm"] else None,
                    width_mm=float(row["width_mm"]) if row["width_mm"] else None,
                    true_pose=PoseClass(row["label"]) if row["label"] else None,
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"{path}:{line_no}: bad row ({exc})") from exc
            frames.append(validate_frame(voltages, geometry, mode, meta))
    if not frames:
        raise SchemaError(f"{path}: dataset holds no rows")
    return frames


def write_scores_csv(scores, is_dark, path) -> None:
    """(rawmax, dark/bright) rows for the light-condition analysis."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        handle.write(_header_line("scores") + "\n")
        writer = csv.writer(handle)
        writer.writerow(["rawmax", "label"])
        for score, dark in zip(scores, is_dark):
            writer.writerow([f"{score:.4f}", "dark" if dark else "bright"])


def read_scores_csv(path) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    with path.open("r", newline="") as handle:
        _check_header(handle.readline(), "scores", path)
        reader = csv.DictReader(handle)
        if reader.fieldnames != ["rawmax", "label"]:
            raise SchemaError(f"{path}: unexpected columns {reader.fieldnames}")
        scores, is_dark = [], []
        for line_no, row in enumerate(reader, start=3):
            try:
                scores.append(float(row["rawmax"]))
                label = row["label"].strip().lower()
                if label not in ("dark", "bright"):
                    raise ValueError(f"label must be dark or bright, got {label!r}")
                is_dark.append(label == "dark")
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"{path}:{line_no}: bad row ({exc})") from exc
    if not scores:
        raise SchemaError(f"{path}: scores file holds no rows")
    return np.asarray(scores), np.asarray(is_dark, dtype=bool)


def write_roc_csv(points: list[RocPoint], path) -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        handle.write(_header_line("roc") + "\n")
        writer = csv.writer(handle)
        writer.writerow(["threshold", "tp", "fn", "fp", "tn", "sensitivity", "specificity"])
        for p in points:
            writer.writerow([
                f"{p.threshold:.2f}", p.tp, p.fn, p.fp, p.tn,
                f"{p.sensitivity:.6f}", f"{p.specificity:.6f}",
            ])


def write_sweep_csv(rows: list[dict], path) -> None:
    path = Path(path)
    columns = [
        "position", "sd", "max", "min", "diff",
        "gate", "mode_decision", "pose", "cog", "alarm",
    ]
    with path.open("w", newline="") as handle:
        handle.write(_header_line("sweep") + "\n")
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([
                f"{row['position']:.1f}",
                f"{row['sd']:.4f}", f"{row['max']:.4f}",
                f"{row['min']:.4f}", f"{row['diff']:.4f}",
                row["gate"], row["mode_decision"],
                row["pose"] if row["pose"] else "",
                _fmt(row["cog"], "{:.4f}"),
                "1" if row["alarm"] else "0",
            ])


def write_power_csv(rows: list[PowerReportRow], savings_percent: float, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as handle:
        handle.write(_header_line("power") + "\n")
        writer = csv.writer(handle)
        writer.writerow([
            "condition", "lux", "single_pd_ma", "total_current_ua", "total_power_uw",
        ])
        for row in rows:
            lux = "" if np.isnan(row.lux) else f"{row.lux:.0f}"
            writer.writerow([
                row.condition, lux, f"{row.single_pd_ma:.3f}",
                f"{row.total_current_ua:.2f}", f"{row.total_power_uw:.2f}",
            ])
        writer.writerow(["mode_savings_percent", "", "", "", f"{savings_percent:.2f}"])


MODEL_SCHEMA = "optigest-model-v1"


def save_model(model: PoseModel, path) -> None:
    path = Path(path)
    document = {
        "schema": MODEL_SCHEMA,
        "mode": model.mode.value,
        "feature_set": model.feature_set.value if model.feature_set else "custom",
        "feature_names": list(model.feature_names),
        "hidden_dim": model.hidden_dim,
        "class_order": [c.value for c in POSE_ORDER],
        "standardization": {
            "mean": [float(x) for x in model.feat_mean],
            "sd": [float(x) for x in model.feat_sd],
        },
        "weights": {
            "w1": [[float(x) for x in row] for row in model.params["w1"]],
            "b1": [float(x) for x in model.params["b1"]],
            "w2": [[float(x) for x in row] for row in model.params["w2"]],
            "b2": [float(x) for x in model.params["b2"]],
        },
        "training": {
            "seed": model.seed,
            "epochs_run": model.epochs_run,
            "best_epoch": model.best_epoch,
            "train_loss": float(model.train_loss),
            "validation_loss": float(model.validation_loss),
        },
    }
    with path.open("w") as handle:
        json.dump(document, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_model(path) -> PoseModel:
    path = Path(path)
    try:
        with path.open("r") as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if document.get("schema") != MODEL_SCHEMA:
        raise SchemaError(f"{path}: unknown model schema {document.get('schema')!r}")
    try:
        params = {
            "w1": np.asarray(document["weights"]["w1"], dtype=float),
            "b1": np.asarray(document["weights"]["b1"], dtype=float),
            "w2": np.asarray(document["weights"]["w2"], dtype=float),
            "b2": np.asarray(document["weights"]["b2"], dtype=float),
        }
        model = PoseModel(
            mode=Mode(document["mode"]),
            feature_set=(
                None if document["feature_set"] == "custom"
                else FeatureSet(document["feature_set"])
            ),
            feature_names=tuple(document["feature_names"]),
            hidden_dim=int(document["hidden_dim"]),
            params=params,
            feat_mean=np.asarray(document["standardization"]["mean"], dtype=float),
            feat_sd=np.asarray(document["standardization"]["sd"], dtype=float),
            seed=int(document["training"]["seed"]),
            epochs_run=int(document["training"]["epochs_run"]),
            best_epoch=int(document["training"]["best_epoch"]),
            train_loss=float(document["training"]["train_loss"]),
            validation_loss=float(document["training"]["validation_loss"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed model document ({exc})") from exc
    if params["w1"].shape != (len(model.feature_names), model.hidden_dim):
        raise SchemaError(f"{path}: weight shapes inconsistent with dims")
    return model
