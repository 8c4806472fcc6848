"""Experiment recipes chaining the modules into the standard workflows:
per-position sweep reports, dataset-to-model training runs, and ROC tuning.
"""
from __future__ import annotations

from .classifier import (
    EvalReport,
    LabeledDataset,
    PoseModel,
    dataset_from_frames,
    evaluate,
    split,
    train_mlp,
)
from .controller import GateDecision, Thresholds, step
from .errors import ModelModeMismatch
from .features import FeatureSet
from .frames import Mode, SensorGeometry
from .roc import RocPoint, optimal_point, roc_sweep
from .simulate import Scene, sweep_distance, sweep_phi, sweep_theta

SWEEP_KINDS = ("phi", "theta", "distance")


def run_sweep(
    kind: str,
    scene: Scene,
    model: PoseModel,
    thresholds: Thresholds,
    mode: Mode | None = None,
) -> list[dict]:
    """One report row per sweep position: frame stats plus controller output."""
    if kind not in SWEEP_KINDS:
        raise ValueError(f"kind must be one of {SWEEP_KINDS}, got {kind!r}")
    if mode is None:
        mode = model.mode
    if mode is not model.mode:
        raise ModelModeMismatch(f"model trained for {model.mode}, sweep asked for {mode}")

    if kind == "phi":
        frames = sweep_phi(scene, mode)
        positions = [f.meta.phi_deg for f in frames]
    elif kind == "theta":
        frames = sweep_theta(scene, mode)
        positions = [f.meta.theta_deg for f in frames]
    else:
        frames = sweep_distance(scene, mode)
        positions = [f.meta.distance_cm for f in frames]

    rows = []
    for position, frame in zip(positions, frames):
        event = step(frame, thresholds, model, scene.geometry)
        v = frame.voltages
        rows.append({
            "position": float(position),
            "sd": float(v.std()),
            "max": float(v.max()),
            "min": float(v.min()),
            "diff": float(v.max() - v.min()),
            "gate": event.gate.value,
            "mode_decision": event.mode_decision.value,
            "pose": event.pose.value if event.pose else None,
            "cog": event.cog,
            "alarm": event.saturation_alarm,
        })
    return rows


def train_from_frames(
    frames,
    geometry: SensorGeometry,
    seed: int = 0,
    hidden_dim: int | None = None,
    ratios: tuple[float, float, float] = (0.7, 0.15, 0.15),
    **train_kwargs,
) -> tuple[PoseModel, EvalReport, tuple[int, int, int]]:
    """Dataset -> split -> train -> held-out evaluation."""
    dataset = dataset_from_frames(frames, geometry, FeatureSet.ALL)
    train, validation, test = split(dataset, ratios, seed)
    model = train_mlp(train, validation, hidden_dim=hidden_dim, seed=seed, **train_kwargs)
    report = evaluate(model, test)
    return model, report, (len(train), len(validation), len(test))


def evaluate_frames(model: PoseModel, frames, geometry: SensorGeometry) -> EvalReport:
    dataset = dataset_from_frames(frames, geometry, FeatureSet.ALL)
    return evaluate(model, dataset)


def roc_analysis(
    scores,
    is_dark,
    t_lo: float = 0.0,
    t_hi: float = 3.8,
    step_v: float = 0.01,
) -> tuple[list[RocPoint], RocPoint]:
    curve = roc_sweep(scores, is_dark, t_lo, t_hi, step_v)
    return curve, optimal_point(curve)


def gate_pass_fraction(frames, thresholds: Thresholds) -> float:
    """Fraction of frames the no-gesture gate lets through as candidates."""
    from .controller import gate

    passed = sum(
        1 for f in frames if gate(f, thresholds) is GateDecision.GESTURE_CANDIDATE
    )
    return passed / len(frames)
