"""Physics-lite scene renderer producing raw frames for both operating modes.

Geometric-optics model at desk scale, not a radiometric simulation:

* ambient level: linear lux-to-volts through the (592 lux, 1.9 V) anchor,
  clamped at the 3.8 V photodiode saturation,
* a triangular angular-acceptance window inside the +/-30 deg field of view,
* directed light casts a sharp shadow band (obstacle width, shifted laterally
  by d*tan(phi)) that occludes each photodiode's 2 mm-half-width aperture,
* diffuse light is occluded by the obstacle's coverage of the photodiode's
  acceptance footprint (half-width d*tan(fov)) at the obstacle plane,
* active mode adds an inverse-quadratic reflection term on top of the
  unobstructed ambient baseline.

The final per-photodiode clamp to [0, v_saturation] is the only nonlinearity
besides the acceptance window, so rendered frames always validate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import MissingObstacle
from .frames import FrameMeta, Mode, PoseClass, RawDataFrame, SensorGeometry

# Invented defaults: only the 2FJ width is measured (32 mm artificial fingers).
DEFAULT_WIDTHS_MM: dict[PoseClass, float] = {
    PoseClass.ONE_FS: 17.0,
    PoseClass.TWO_FJ: 32.0,
    PoseClass.FOUR_FJ: 72.0,
}

PHI_SWEEP_DEG: tuple[float, ...] = tuple(float(a) for a in range(0, 360, 10))    # 36
THETA_SWEEP_DEG: tuple[float, ...] = tuple(float(a) for a in range(0, 190, 10))  # 19
DISTANCE_SWEEP_CM: tuple[float, ...] = tuple(float(d) for d in range(1, 11))     # 10


@dataclass(frozen=True)
class LightEnvironment:
    """Ambient light: level, directed fraction, and source direction.

    direct_fraction maps sky conditions to the directed/scattered mix
    (cloudy ~0.3, sunny ~0.9). phi is the azimuth (top view) and theta the
    elevation (side view) of the source relative to the sensor normal; theta
    spans the full half-circle of the elevation sweep.
    """

    lux: float = 700.0
    direct_fraction: float = 0.7
    phi_deg: float = 0.0
    theta_deg: float = 0.0

    def __post_init__(self):
        if self.lux < 0:
            raise ValueError(f"lux must be >= 0, got {self.lux}")
        if not 0.0 <= self.direct_fraction <= 1.0:
            raise ValueError(f"direct_fraction must lie in [0, 1], got {self.direct_fraction}")
        if abs(self.phi_deg) > 180.0 or abs(self.theta_deg) > 180.0:
            raise ValueError("angles must lie in [-180, 180] degrees")


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned rectangular stand-in for a hand pose."""

    pose: PoseClass = PoseClass.TWO_FJ
    width_mm: float = 32.0
    lateral_offset_cm: float = 0.0
    distance_cm: float = 2.0

    def __post_init__(self):
        if self.width_mm <= 0:
            raise ValueError(f"width must be positive, got {self.width_mm}")
        if self.distance_cm <= 0:
            raise ValueError(f"distance must be positive, got {self.distance_cm}")

    @classmethod
    def for_pose(cls, pose: PoseClass, lateral_offset_cm: float = 0.0,
                 distance_cm: float = 2.0) -> "Obstacle":
        return cls(pose, DEFAULT_WIDTHS_MM[pose], lateral_offset_cm, distance_cm)

    @property
    def half_width_cm(self) -> float:
        return self.width_mm / 20.0


@dataclass(frozen=True)
class ImperfectionModel:
    """Per-photodiode gain multipliers and additive Gaussian voltage noise."""

    gains: tuple[float, ...] = (1.0,) * 8
    noise_sd: float = 0.02
    seed: int = 0

    def __post_init__(self):
        if any(g <= 0 for g in self.gains):
            raise ValueError("gains must be positive")
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")


@dataclass(frozen=True)
class Scene:
    """Everything the renderer needs for one frame."""

    light: LightEnvironment = LightEnvironment()
    obstacle: Obstacle | None = Obstacle()
    imperfections: ImperfectionModel = ImperfectionModel()
    geometry: SensorGeometry = SensorGeometry()
    reflect_amplitude_v: float = 2.5   # LED reflection peak at zero distance
    reflect_falloff_cm: float = 3.0    # distance scale of the 1/(1+(d/d0)^2) falloff
    aperture_half_width_cm: float = 0.2


def lux_to_volts(lux: float, geometry: SensorGeometry) -> float:
    """Linear conversion through the calibration anchor, clamped at saturation."""
    if lux < 0:
        raise ValueError(f"lux must be >= 0, got {lux}")
    anchor_lux, anchor_v = geometry.lux_anchor
    return float(min(max(lux * anchor_v / anchor_lux, 0.0), geometry.v_saturation))


def angular_acceptance(alpha_deg: float, geometry: SensorGeometry) -> float:
    """Triangular window: 1 on-axis, 0 at the field-of-view half-angle and beyond."""
    return max(0.0, 1.0 - abs(alpha_deg) / geometry.fov_half_angle_deg)


def incidence_angle(phi_deg: float, theta_deg: float) -> float:
    """Angle (degrees) between the light direction and the sensor normal."""
    c = math.cos(math.radians(phi_deg)) * math.cos(math.radians(theta_deg))
    return math.degrees(math.acos(max(-1.0, min(1.0, c))))


def _overlap(lo_a: float, hi_a: float, lo_b: float, hi_b: float) -> float:
    return max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))


def _occlusion_fractions(scene: Scene) -> tuple[np.ndarray, np.ndarray, float]:
    """(f_dir, f_diff, c_v): directed/diffuse shadow coverage per photodiode.

    f_dir[i]: fraction of photodiode i's aperture inside the directed shadow
    band, whose center shifts laterally by d*tan(phi).
    f_diff[i]: fraction of photodiode i's acceptance footprint at the obstacle
    plane that the obstacle covers.
    c_v: vertical coverage of the directed shadow after the d*tan(theta)
    displacement, against the same footprint half-height.
    """
    pos = scene.geometry.positions_cm
    obstacle = scene.obstacle
    if obstacle is None:
        zero = np.zeros(scene.geometry.pd_count)
        return zero, zero, 1.0

    d = obstacle.distance_cm
    half_w = obstacle.half_width_cm
    tan_fov = math.tan(math.radians(scene.geometry.fov_half_angle_deg))
    footprint_half = d * tan_fov

    tan_phi = math.tan(math.radians(scene.light.phi_deg))
    band_center = obstacle.lateral_offset_cm + d * tan_phi
    ap = scene.aperture_half_width_cm
    f_dir = np.array([
        _overlap(x - ap, x + ap, band_center - half_w, band_center + half_w) / (2 * ap)
        for x in pos
    ])

    obst_lo = obstacle.lateral_offset_cm - half_w
    obst_hi = obstacle.lateral_offset_cm + half_w
    f_diff = np.array([
        _overlap(x - footprint_half, x + footprint_half, obst_lo, obst_hi)
        / (2 * footprint_half)
        for x in pos
    ])

    vertical_shift = d * math.tan(math.radians(scene.light.theta_deg))
    c_v = max(0.0, 1.0 - abs(vertical_shift) / (2 * footprint_half))
    return f_dir, f_diff, c_v


def _finish(scene: Scene, ideal: np.ndarray, rng: np.random.Generator | None,
            mode: Mode, meta: FrameMeta) -> RawDataFrame:
    imp = scene.imperfections
    if len(imp.gains) != scene.geometry.pd_count:
        raise ValueError(
            f"need {scene.geometry.pd_count} gains, got {len(imp.gains)}"
        )
    v = np.asarray(imp.gains) * ideal
    if imp.noise_sd > 0:
        if rng is None:
            rng = np.random.default_rng(imp.seed)
        v = v + rng.normal(0.0, imp.noise_sd, size=v.shape)
    v = np.clip(v, 0.0, scene.geometry.v_saturation)
    return RawDataFrame(voltages=v, mode=mode, meta=meta)


def _scene_meta(scene: Scene) -> FrameMeta:
    o = scene.obstacle
    return FrameMeta(
        lux=scene.light.lux,
        phi_deg=scene.light.phi_deg,
        theta_deg=scene.light.theta_deg,
        distance_cm=o.distance_cm if o else None,
        width_mm=o.width_mm if o else None,
        true_pose=o.pose if o else None,
    )


def render_passive(scene: Scene, rng: np.random.Generator | None = None) -> RawDataFrame:
    """Shadow pattern under ambient light only.

    Per photodiode: directed light passes the triangular acceptance and is cut
    by the sharp shadow band; diffuse light is cut by the footprint coverage.
    """
    level = lux_to_volts(scene.light.lux, scene.geometry)
    k = scene.light.direct_fraction
    f_dir, f_diff, c_v = _occlusion_fractions(scene)

    acceptance = angular_acceptance(
        incidence_angle(scene.light.phi_deg, scene.light.theta_deg), scene.geometry
    )
    directed = k * acceptance * (1.0 - f_dir) * c_v if acceptance > 0 else 0.0
    diffuse = (1.0 - k) * (1.0 - f_diff)
    ideal = level * (directed + diffuse)
    if np.isscalar(ideal) or ideal.ndim == 0:
        ideal = np.full(scene.geometry.pd_count, float(ideal))
    return _finish(scene, ideal, rng, Mode.PASSIVE, _scene_meta(scene))


def ambient_baseline(scene: Scene) -> float:
    """Unobstructed per-photodiode ambient level (volts) for the scene's light."""
    level = lux_to_volts(scene.light.lux, scene.geometry)
    k = scene.light.direct_fraction
    acceptance = angular_acceptance(
        incidence_angle(scene.light.phi_deg, scene.light.theta_deg), scene.geometry
    )
    return level * (k * acceptance + (1.0 - k))


def render_active(scene: Scene, rng: np.random.Generator | None = None) -> RawDataFrame:
    """Reflection pattern under the sensor's own illumination.

    The obstacle reflects in proportion to its footprint coverage, with an
    inverse-quadratic distance falloff; ambient light adds an unobstructed
    baseline on top of the reflected signal.
    """
    _, f_diff, _ = _occlusion_fractions(scene)
    if scene.obstacle is None:
        reflection = np.zeros(scene.geometry.pd_count)
    else:
        d = scene.obstacle.distance_cm
        falloff = 1.0 + (d / scene.reflect_falloff_cm) ** 2
        reflection = scene.reflect_amplitude_v * f_diff / falloff
    ideal = reflection + ambient_baseline(scene)
    return _finish(scene, ideal, rng, Mode.ACTIVE, _scene_meta(scene))


def render(scene: Scene, mode: Mode, rng: np.random.Generator | None = None) -> RawDataFrame:
    if mode is Mode.ACTIVE:
        return render_active(scene, rng)
    return render_passive(scene, rng)


def _wrap_angle(angle_deg: float) -> float:
    return (angle_deg + 180.0) % 360.0 - 180.0


def _sweep(scene: Scene, mode: Mode, scenes: list[Scene]) -> list[RawDataFrame]:
    frames = []
    for index, positioned in enumerate(scenes):
        rng = np.random.default_rng([scene.imperfections.seed, index])
        frames.append(render(positioned, mode, rng))
    return frames


def sweep_phi(scene: Scene, mode: Mode = Mode.PASSIVE) -> list[RawDataFrame]:
    """Full azimuth circle, 36 positions at a 10 degree step."""
    scenes = [
        replace(scene, light=replace(scene.light, phi_deg=_wrap_angle(a)))
        for a in PHI_SWEEP_DEG
    ]
    return _sweep(scene, mode, scenes)


def sweep_theta(scene: Scene, mode: Mode = Mode.PASSIVE) -> list[RawDataFrame]:
    """Elevation half circle, 19 positions at a 10 degree step."""
    scenes = [
        replace(scene, light=replace(scene.light, theta_deg=a))
        for a in THETA_SWEEP_DEG
    ]
    return _sweep(scene, mode, scenes)


def sweep_distance(scene: Scene, mode: Mode = Mode.PASSIVE) -> list[RawDataFrame]:
    """Obstacle pushed from 1 cm out to 10 cm at a 1 cm step."""
    if scene.obstacle is None:
        raise MissingObstacle("the distance sweep needs an obstacle in the scene")
    scenes = [
        replace(scene, obstacle=replace(scene.obstacle, distance_cm=d))
        for d in DISTANCE_SWEEP_CM
    ]
    return _sweep(scene, mode, scenes)


def gen_dataset(
    count_per_class: int,
    mode: Mode,
    lux_levels: tuple[float, ...],
    seed: int,
    *,
    geometry: SensorGeometry = SensorGeometry(),
    direct_fraction: float = 0.7,
    noise_sd: float = 0.02,
    widths_mm: dict[PoseClass, float] | None = None,
    gate_t_sd: float = 0.13,
    retry_limit: int = 10,
    reflect_amplitude_v: float = 2.5,
    reflect_falloff_cm: float = 3.0,
) -> list[RawDataFrame]:
    """Labeled frames under favorable (perpendicular) conditions.

    Per row: obstacle width ~ Normal(class mean, 10% sd), lateral offset
    ~ U(-2, 2) cm, distance ~ U(1, 5) cm, lux drawn from the level set with
    +/-10% jitter. Rows whose frame fails the no-gesture gate are resampled
    up to retry_limit times (the last attempt is kept regardless), so a small
    residue of sub-threshold rows can remain.

    Determinism: each row draws from a generator seeded by (seed, row index),
    so the dataset is byte-identical for a given seed no matter how rows are
    scheduled.
    """
    if count_per_class <= 0:
        raise ValueError("count_per_class must be positive")
    widths = dict(DEFAULT_WIDTHS_MM if widths_mm is None else widths_mm)
    levels = np.asarray(lux_levels, dtype=float)

    frames: list[RawDataFrame] = []
    row = 0
    for pose in DEFAULT_WIDTHS_MM:
        mean_width = widths[pose]
        for _ in range(count_per_class):
            rng = np.random.default_rng([seed, row])
            frame = None
            for _attempt in range(retry_limit + 1):
                width = max(1.0, rng.normal(mean_width, 0.1 * mean_width))
                offset = rng.uniform(-2.0, 2.0)
                distance = rng.uniform(1.0, 5.0)
                lux = float(rng.choice(levels)) * rng.uniform(0.9, 1.1)
                scene = Scene(
                    light=LightEnvironment(lux=lux, direct_fraction=direct_fraction),
                    obstacle=Obstacle(pose, width, offset, distance),
                    imperfections=ImperfectionModel(noise_sd=noise_sd, seed=seed),
                    geometry=geometry,
                    reflect_amplitude_v=reflect_amplitude_v,
                    reflect_falloff_cm=reflect_falloff_cm,
                )
                frame = render(scene, mode, rng)
                if frame.voltages.std() > gate_t_sd:
                    break
            frames.append(frame)
            row += 1
    return frames


def gen_ambient_frames(
    count: int,
    lux_levels: tuple[float, ...],
    seed: int,
    *,
    geometry: SensorGeometry = SensorGeometry(),
    direct_fraction: float = 0.7,
    noise_sd: float = 0.02,
    gain_spread: float = 0.05,
) -> list[RawDataFrame]:
    """No-obstacle passive frames with per-frame gain spread and noise.

    Used to exercise the no-gesture gate: these frames should virtually always
    stay below the sd threshold.
    """
    levels = np.asarray(lux_levels, dtype=float)
    frames = []
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        gains = tuple(rng.uniform(1.0 - gain_spread, 1.0 + gain_spread, geometry.pd_count))
        lux = float(rng.choice(levels)) * rng.uniform(0.9, 1.1)
        scene = Scene(
            light=LightEnvironment(lux=lux, direct_fraction=direct_fraction),
            obstacle=None,
            imperfections=ImperfectionModel(gains=gains, noise_sd=noise_sd, seed=seed),
            geometry=geometry,
        )
        frames.append(render_passive(scene, rng))
    return frames
