"""Flat key = value configuration covering geometry, thresholds, scene,
imperfections, and power parameters.

Every default equals the calibrated or declared-invented value used across
the library, so an empty file (or no file) reproduces the standard setup.
Unknown keys are rejected to catch typos early.

Example file:

    # sunny scene, 2FJ obstacle at 2 cm
    lux = 837
    direct_fraction = 0.9      # cloudy ~0.3, sunny ~0.9
    obstacle = 2FJ
    distance_cm = 2.0
    noise_sd_v = 0.0
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .controller import Thresholds
from .errors import ConfigError
from .frames import PoseClass, SensorGeometry
from .power import DEFAULT_PD_CURRENT_TABLE, PowerParams
from .simulate import ImperfectionModel, LightEnvironment, Obstacle, Scene

_POSES = {p.value: p for p in PoseClass}


@dataclass
class Config:
    # geometry
    pd_count: int = 8
    pitch_cm: float = 1.0
    fov_half_angle_deg: float = 30.0
    v_saturation: float = 3.8
    lux_anchor_lux: float = 592.0
    lux_anchor_volts: float = 1.9
    supply_voltage: float = 5.0
    # controller thresholds
    t_sd: float = 0.13
    t_max: float = 0.6
    v_alarm: float = 3.75
    mode_hysteresis: float = 0.0
    # scene / light
    lux: float = 700.0
    direct_fraction: float = 0.7
    phi_deg: float = 0.0
    theta_deg: float = 0.0
    obstacle: str = "2FJ"          # 1FS | 2FJ | 4FJ | none
    width_mm: float | None = None  # defaults to the pose's standard width
    offset_cm: float = 0.0
    distance_cm: float = 2.0
    # imperfections
    gains: tuple[float, ...] = (1.0,) * 8
    noise_sd_v: float = 0.02
    noise_seed: int = 0
    # active-mode reflection
    led_amplitude_v: float = 2.5
    led_falloff_cm: float = 3.0
    aperture_half_width_cm: float = 0.2
    # dataset generation
    width_1fs_mm: float = 17.0
    width_2fj_mm: float = 32.0
    width_4fj_mm: float = 72.0
    lux_levels: tuple[float, ...] = (230.0, 700.0, 1460.0, 2200.0)
    active_lux_levels: tuple[float, ...] = (0.0,)
    count_per_class: int = 2000
    gate_retry_limit: int = 10
    # power
    settling_time_us: float = 375.0
    cycle_period_ms: float = 25.0
    active_total_ma: float = 1.982
    passive_total_ma: float = 0.132
    avg_single_pd_ma: float = 1.1
    pd_current_table: tuple[tuple[str, float, float], ...] = DEFAULT_PD_CURRENT_TABLE

    def geometry(self) -> SensorGeometry:
        return SensorGeometry(
            pd_count=self.pd_count,
            pitch_cm=self.pitch_cm,
            fov_half_angle_deg=self.fov_half_angle_deg,
            v_saturation=self.v_saturation,
            lux_anchor=(self.lux_anchor_lux, self.lux_anchor_volts),
            supply_voltage=self.supply_voltage,
        )

    def thresholds(self) -> Thresholds:
        return Thresholds(
            t_sd=self.t_sd, t_max=self.t_max,
            v_alarm=self.v_alarm, hysteresis=self.mode_hysteresis,
        )

    def widths_mm(self) -> dict[PoseClass, float]:
        return {
            PoseClass.ONE_FS: self.width_1fs_mm,
            PoseClass.TWO_FJ: self.width_2fj_mm,
            PoseClass.FOUR_FJ: self.width_4fj_mm,
        }

    def scene(self) -> Scene:
        name = self.obstacle.strip()
        if name.lower() in ("none", ""):
            obstacle = None
        else:
            if name not in _POSES:
                raise ConfigError(f"obstacle must be one of 1FS/2FJ/4FJ/none, got {name!r}")
            pose = _POSES[name]
            width = self.width_mm if self.width_mm is not None else self.widths_mm()[pose]
            obstacle = Obstacle(pose, width, self.offset_cm, self.distance_cm)
        try:
            return Scene(
                light=LightEnvironment(
                    lux=self.lux, direct_fraction=self.direct_fraction,
                    phi_deg=self.phi_deg, theta_deg=self.theta_deg,
                ),
                obstacle=obstacle,
                imperfections=ImperfectionModel(
                    gains=self.gains, noise_sd=self.noise_sd_v, seed=self.noise_seed,
                ),
                geometry=self.geometry(),
                reflect_amplitude_v=self.led_amplitude_v,
                reflect_falloff_cm=self.led_falloff_cm,
                aperture_half_width_cm=self.aperture_half_width_cm,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def power_params(self) -> PowerParams:
        return PowerParams(
            n_pd=self.pd_count,
            settling_time_s=self.settling_time_us * 1e-6,
            cycle_period_s=self.cycle_period_ms * 1e-3,
            supply_voltage=self.supply_voltage,
            pd_current_table=self.pd_current_table,
            active_total_ma=self.active_total_ma,
            passive_total_ma=self.passive_total_ma,
            avg_single_pd_ma=self.avg_single_pd_ma,
        )


_FIELD_TYPES = {f.name: f.type for f in fields(Config)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "pd_current_table":
        # label:lux:mA triples separated by semicolons
        table = []
        for part in raw.split(";"):
            pieces = part.strip().split(":")
            if len(pieces) != 3:
                raise ConfigError(f"pd_current_table entries need label:lux:mA, got {part!r}")
            table.append((pieces[0].strip(), float(pieces[1]), float(pieces[2])))
        return tuple(table)
    if key in ("gains", "lux_levels", "active_lux_levels"):
        return tuple(float(x) for x in raw.split(","))
    if key == "obstacle":
        return raw
    if key == "width_mm" and raw.lower() in ("none", ""):
        return None
    declared = _FIELD_TYPES[key]
    if "int" in declared:
        return int(raw)
    if "float" in declared:
        return float(raw)
    return raw


def load_config(path=None, overrides: dict | None = None) -> Config:
    """Read a flat key = value file (all keys optional) plus overrides."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        for line_no, line in enumerate(path.read_text().splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            raw = raw.split("#", 1)[0]  # trailing comment
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            try:
                values[key] = _parse_value(key, raw)
            except (ValueError, ConfigError) as exc:
                raise ConfigError(f"{path}:{line_no}: {exc}") from exc
    if overrides:
        values.update(overrides)
    try:
        config = Config(**values)
        # construct the derived objects now so bad values fail at load time
        config.geometry()
        config.thresholds()
        config.scene()
        config.power_params()
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return config
