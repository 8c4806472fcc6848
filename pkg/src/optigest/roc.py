"""ROC analysis of the light-condition split over the rawmax threshold sweep.

The positive class is dark (active mode needed): its misses are the costly
errors, since not turning on the illumination can lose the gesture entirely.
A score is classified dark iff score < threshold, matching the controller's
mode rule (bright at equality).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClass, SingleClass


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    tp: int
    fn: int
    fp: int
    tn: int
    sensitivity: float
    specificity: float

    @property
    def distance_to_perfect(self) -> float:
        """Euclidean distance to the perfect classifier corner (0, 1)."""
        return math.hypot(1.0 - self.specificity, 1.0 - self.sensitivity)


def confusion_metrics(tp: int, fn: int, fp: int, tn: int) -> tuple[float, float, float]:
    """(sensitivity, specificity, accuracy) as exact ratios of the counts."""
    if min(tp, fn, fp, tn) < 0:
        raise ValueError("confusion counts must be non-negative")
    if tp + fn == 0 or tn + fp == 0:
        raise EmptyClass("both classes need at least one sample")
    total = tp + fn + fp + tn
    return tp / (tp + fn), tn / (tn + fp), (tp + tn) / total


def roc_sweep(
    scores,
    is_dark,
    t_lo: float = 0.0,
    t_hi: float = 3.8,
    step: float = 0.01,
) -> list[RocPoint]:
    """One RocPoint per threshold in [t_lo, t_hi] at the given step.

    Class supports are constant along the curve; sensitivity is non-decreasing
    and specificity non-increasing in the threshold.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    s = np.asarray(scores, dtype=float)
    d = np.asarray(is_dark, dtype=bool)
    if s.shape != d.shape or s.ndim != 1:
        raise ValueError("scores and labels must be 1-d and the same length")
    n_dark = int(d.sum())
    n_bright = int((~d).sum())
    if n_dark == 0 or n_bright == 0:
        raise SingleClass("need both dark and bright samples")

    n_steps = int(round((t_hi - t_lo) / step))
    thresholds = t_lo + step * np.arange(n_steps + 1)
    points = []
    for t in thresholds:
        called_dark = s < t
        tp = int((called_dark & d).sum())
        fp = int((called_dark & ~d).sum())
        points.append(
            RocPoint(
                threshold=float(t),
                tp=tp,
                fn=n_dark - tp,
                fp=fp,
                tn=n_bright - fp,
                sensitivity=tp / n_dark,
                specificity=(n_bright - fp) / n_bright,
            )
        )
    return points


def optimal_point(curve: list[RocPoint]) -> RocPoint:
    """Curve point closest to the perfect corner (0, 1); ties take the lower threshold.

    Preferring the lower threshold keeps the power-saving passive mode engaged
    unless the data clearly justifies switching earlier.
    """
    if not curve:
        raise ValueError("empty ROC curve")
    return min(curve, key=lambda p: (p.distance_to_perfect, p.threshold))
