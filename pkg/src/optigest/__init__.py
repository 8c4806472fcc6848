"""optigest: dual-mode linear photodiode-array gesture sensing.

Signal pipeline (normalization, features, gating, mode switching, pose
classification), ROC tuning of the mode threshold, a duty-cycle power model,
and a desk-scale geometric scene simulator for both operating modes.
"""

from . import errors
from .classifier import (
    EvalReport,
    LabeledDataset,
    PoseModel,
    dataset_from_frames,
    evaluate,
    predict,
    select_features,
    split,
    train_mlp,
    train_stump,
)
from .controller import (
    GateDecision,
    ModeDecision,
    SensorEvent,
    Thresholds,
    gate,
    select_mode,
    step,
)
from .features import (
    ACTIVE_NINE,
    FEATURE_NAMES,
    PASSIVE_NINE,
    FeatureSet,
    FeatureVector,
    basic_stats,
    cog,
    count_features,
    extract,
    full_width_at,
    slope_angle,
    weighted_moments,
)
from .frames import (
    FrameMeta,
    Mode,
    NormalizedFrame,
    POSE_ORDER,
    PoseClass,
    RawDataFrame,
    SensorGeometry,
    pd_positions,
    validate_frame,
)
from .normalize import normalize_active, normalize_frame, normalize_passive, pattern_sd
from .power import (
    PowerParams,
    duty_factor,
    mode_savings,
    pd_budget,
    power_report,
)
from .roc import RocPoint, confusion_metrics, optimal_point, roc_sweep
from .simulate import (
    DEFAULT_WIDTHS_MM,
    ImperfectionModel,
    LightEnvironment,
    Obstacle,
    Scene,
    angular_acceptance,
    gen_ambient_frames,
    gen_dataset,
    lux_to_volts,
    render,
    render_active,
    render_passive,
    sweep_distance,
    sweep_phi,
    sweep_theta,
)

__version__ = "0.1.0"
