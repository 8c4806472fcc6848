"""Per-cycle decision core: gesture gate, mode selection, and orchestration.

The controller is a pure per-frame function; the caller owns the current-mode
state (needed only when hysteresis is enabled) and the 40 Hz timing.

Boundary conventions, fixed so golden tests stay stable: the gesture gate
uses strict sd > t_sd; mode selection treats rawmax >= t_max as bright.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ModelModeMismatch
from .features import extract
from .frames import Mode, PoseClass, RawDataFrame, SensorGeometry
from .normalize import normalize_frame, pattern_sd


@dataclass(frozen=True)
class Thresholds:
    """Decision thresholds of the gesture recognition controller.

    t_sd gates gesture candidates, t_max splits dark (needs illumination)
    from bright (ambient suffices), v_alarm flags the saturation region with
    a small guard band below the 3.8 V clamp to avoid float-equality there.
    hysteresis widens the t_max decision into a band when a current mode is
    supplied (default 0: plain threshold rule).
    """

    t_sd: float = 0.13
    t_max: float = 0.6
    v_alarm: float = 3.75
    hysteresis: float = 0.0

    def __post_init__(self):
        if self.t_sd <= 0:
            raise ValueError(f"t_sd must be positive, got {self.t_sd}")
        if not 0 < self.t_max < self.v_alarm:
            raise ValueError(f"need 0 < t_max < v_alarm, got {self.t_max}, {self.v_alarm}")
        if self.hysteresis < 0:
            raise ValueError(f"hysteresis must be >= 0, got {self.hysteresis}")

    def validate_against(self, geometry: SensorGeometry) -> None:
        if self.t_sd >= geometry.v_saturation or self.v_alarm > geometry.v_saturation:
            raise ValueError("thresholds exceed the saturation level")


class GateDecision(enum.Enum):
    NO_GESTURE = "no-gesture"
    GESTURE_CANDIDATE = "gesture-candidate"


class ModeDecision(enum.Enum):
    STAY_PASSIVE = "stay-passive"        # bright: ambient light suffices
    SWITCH_TO_ACTIVE = "switch-to-active"  # dark: own illumination needed


@dataclass(frozen=True)
class SensorEvent:
    """Controller output for one sampling cycle.

    pose and cog are populated only when the gate passes.
    """

    mode_decision: ModeDecision
    gate: GateDecision
    pose: PoseClass | None
    cog: float | None
    saturation_alarm: bool


def gate(raw: RawDataFrame, thresholds: Thresholds) -> GateDecision:
    """Gesture candidate iff the frame's population sd strictly exceeds t_sd.

    sd is shift- and sign-invariant, so gating on raw or normalized values is
    identical.
    """
    if pattern_sd(raw.voltages) > thresholds.t_sd:
        return GateDecision.GESTURE_CANDIDATE
    return GateDecision.NO_GESTURE


def select_mode(
    rawmax: float,
    thresholds: Thresholds,
    current: ModeDecision | None = None,
) -> tuple[ModeDecision, bool]:
    """Dark (switch to active) iff rawmax < t_max; alarm iff rawmax >= v_alarm.

    With a nonzero hysteresis width and a known current decision, the switch
    point moves half a band away from the current mode to suppress flapping.
    """
    threshold = thresholds.t_max
    if thresholds.hysteresis > 0.0 and current is not None:
        half = thresholds.hysteresis / 2.0
        threshold = threshold - half if current is ModeDecision.STAY_PASSIVE else threshold + half
    decision = ModeDecision.SWITCH_TO_ACTIVE if rawmax < threshold else ModeDecision.STAY_PASSIVE
    return decision, rawmax >= thresholds.v_alarm


def step(
    raw: RawDataFrame,
    thresholds: Thresholds,
    model,
    geometry: SensorGeometry,
    current: ModeDecision | None = None,
) -> SensorEvent:
    """Full per-cycle pipeline: mode decision, gate, then classify + localize.

    The model must be trained for the frame's mode; a gated frame is
    normalized per mode, its per-mode features extracted, the pose predicted
    and the COG computed. No pose is ever emitted when the gate rejects.
    """
    from .classifier import predict
    from .features import FeatureSet
    from .features import cog as cog_of

    if model.mode is not raw.mode:
        raise ModelModeMismatch(
            f"model trained for {model.mode} applied to a {raw.mode} frame"
        )
    mode_decision, alarm = select_mode(raw.rawmax, thresholds, current)
    if gate(raw, thresholds) is GateDecision.NO_GESTURE:
        return SensorEvent(mode_decision, GateDecision.NO_GESTURE, None, None, alarm)

    pattern = normalize_frame(raw)
    feature_set = model.feature_set if model.feature_set is not None else FeatureSet.ALL
    features = extract(pattern, feature_set, geometry)
    pose, _ = predict(model, features)
    return SensorEvent(
        mode_decision=mode_decision,
        gate=GateDecision.GESTURE_CANDIDATE,
        pose=pose,
        cog=cog_of(pattern, geometry),
        saturation_alarm=alarm,
    )
