"""Core value types: sensor geometry, raw frames, and normalized patterns.

All types are immutable values and safe to share between threads.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange, WrongArity


class Mode(enum.Enum):
    """Operating mode the frame was sampled in."""

    ACTIVE = "active"    # sensor's own pulsed IR illumination, reflection pattern
    PASSIVE = "passive"  # ambient light only, shadow pattern


class PoseClass(enum.Enum):
    """The three hand-pose classes, ordered by the width of the finger plane."""

    ONE_FS = "1FS"   # one finger separated
    TWO_FJ = "2FJ"   # two fingers joined
    FOUR_FJ = "4FJ"  # four fingers joined


# Canonical class order; also the deterministic tie-break order for prediction.
POSE_ORDER: tuple[PoseClass, ...] = (PoseClass.ONE_FS, PoseClass.TWO_FJ, PoseClass.FOUR_FJ)


@dataclass(frozen=True)
class SensorGeometry:
    """Physical layout and electrical limits of the linear photodiode array.

    Positions are derived from pd_count and pitch, centered on the sensor so
    that COG = 0 means a pose above the sensor center.
    """

    pd_count: int = 8
    pitch_cm: float = 1.0
    fov_half_angle_deg: float = 30.0
    v_saturation: float = 3.8
    lux_anchor: tuple[float, float] = (592.0, 1.9)  # (lux, volts) calibration pair
    supply_voltage: float = 5.0

    def __post_init__(self):
        if self.pd_count < 2:
            raise ValueError(f"pd_count must be >= 2, got {self.pd_count}")
        if self.pitch_cm <= 0:
            raise ValueError(f"pitch_cm must be positive, got {self.pitch_cm}")
        if self.v_saturation <= 0:
            raise ValueError(f"v_saturation must be positive, got {self.v_saturation}")
        anchor_lux, anchor_v = self.lux_anchor
        if anchor_lux <= 0 or anchor_v <= 0:
            raise ValueError(f"lux_anchor must be positive, got {self.lux_anchor}")
        # The anchor voltage is half the saturation level by construction.
        if not np.isclose(anchor_v, self.v_saturation / 2.0):
            raise ValueError(
                f"lux_anchor voltage {anchor_v} must equal v_saturation/2 = {self.v_saturation / 2.0}"
            )

    @property
    def positions_cm(self) -> np.ndarray:
        """Lateral photodiode coordinates in cm, strictly increasing, symmetric about 0."""
        n = self.pd_count
        pos = (np.arange(n) - (n - 1) / 2.0) * self.pitch_cm
        pos.flags.writeable = False
        return pos

    @property
    def span_cm(self) -> float:
        """Distance between the outermost photodiodes."""
        return (self.pd_count - 1) * self.pitch_cm


def pd_positions(geometry: SensorGeometry) -> np.ndarray:
    """Photodiode coordinates along the sensor axis (cm), centered on 0."""
    return geometry.positions_cm


@dataclass(frozen=True)
class FrameMeta:
    """Optional scene provenance attached to simulated or recorded frames.

    Never consulted by the pipeline math; only by evaluation and harness code.
    """

    lux: float | None = None
    phi_deg: float | None = None
    theta_deg: float | None = None
    distance_cm: float | None = None
    width_mm: float | None = None
    true_pose: PoseClass | None = None


@dataclass(frozen=True, eq=False)
class RawDataFrame:
    """One 40 Hz sampling cycle: one voltage per photodiode plus the mode tag."""

    voltages: np.ndarray
    mode: Mode
    meta: FrameMeta | None = None

    def __post_init__(self):
        v = np.asarray(self.voltages, dtype=float).copy()
        v.flags.writeable = False
        object.__setattr__(self, "voltages", v)

    @property
    def rawmax(self) -> float:
        """Maximum voltage before normalization; the ambient-light statistic."""
        return float(self.voltages.max())


@dataclass(frozen=True, eq=False)
class NormalizedFrame:
    """Non-negative light/shadow pattern with min exactly 0, plus rawmax."""

    values: np.ndarray
    rawmax: float
    source_mode: Mode

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def validate_frame(
    voltages,
    geometry: SensorGeometry,
    mode: Mode,
    meta: FrameMeta | None = None,
) -> RawDataFrame:
    """Check arity and voltage range, returning an immutable frame.

    Raises WrongArity unless there is exactly one value per photodiode, and
    OutOfRange if any value falls outside [0, v_saturation].
    """
    v = np.asarray(voltages, dtype=float)
    if v.ndim != 1 or v.shape[0] != geometry.pd_count:
        raise WrongArity(f"expected {geometry.pd_count} voltages, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise OutOfRange("voltages must be finite")
    if v.min() < 0.0 or v.max() > geometry.v_saturation:
        raise OutOfRange(
            f"voltages must lie in [0, {geometry.v_saturation}], "
            f"got min {v.min():.4f} max {v.max():.4f}"
        )
    return RawDataFrame(voltages=v, mode=mode, meta=meta)
