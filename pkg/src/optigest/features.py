"""Scalar feature extraction from normalized patterns.

Widths are measured in cm with linear interpolation between photodiode
positions (sub-pitch resolution). Skewness and kurtosis treat the pattern as
a discrete distribution over positions, consistent with COG being the
weighted first moment; set ``moments_over_values=True`` on extract() to use
plain moments of the 8 values instead.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import DegenerateDistribution, FeatureSetMismatch, NoSignal
from .frames import NormalizedFrame, SensorGeometry
from .normalize import pattern_sd


class FeatureSet(enum.Enum):
    """Named feature subsets; the nine-feature lists are the published defaults."""

    ACTIVE_NINE = "active-nine"
    PASSIVE_NINE = "passive-nine"
    ALL = "all"


FEATURE_NAMES: tuple[str, ...] = (
    "fw15", "fw50", "fw85", "cog", "mean", "sd", "max", "min", "diff",
    "slope_angle", "skewness", "kurtosis", "n_below_2sd", "n_above_mean", "rawmax",
)

ACTIVE_NINE: tuple[str, ...] = (
    "fw50", "fw85", "cog", "mean", "slope_angle", "sd", "kurtosis",
    "n_below_2sd", "n_above_mean",
)

PASSIVE_NINE: tuple[str, ...] = (
    "fw15", "fw85", "cog", "mean", "slope_angle", "skewness", "kurtosis",
    "n_below_2sd", "rawmax",
)


def feature_names_for(feature_set: FeatureSet) -> tuple[str, ...]:
    if feature_set is FeatureSet.ACTIVE_NINE:
        return ACTIVE_NINE
    if feature_set is FeatureSet.PASSIVE_NINE:
        return PASSIVE_NINE
    return FEATURE_NAMES


@dataclass(frozen=True)
class FeatureVector:
    """Named scalar features; non-requested entries stay None.

    rawmax is always copied from the source pattern because it doubles as the
    ambient-light statistic even when it is not part of the feature set.
    """

    fw15: float | None = None
    fw50: float | None = None
    fw85: float | None = None
    cog: float | None = None
    mean: float | None = None
    sd: float | None = None
    max: float | None = None
    min: float | None = None
    diff: float | None = None
    slope_angle: float | None = None
    skewness: float | None = None
    kurtosis: float | None = None
    n_below_2sd: float | None = None
    n_above_mean: float | None = None
    rawmax: float | None = None

    def as_array(self, names: tuple[str, ...]) -> np.ndarray:
        """Dense vector in the given feature order; missing entries raise."""
        out = np.empty(len(names))
        for i, name in enumerate(names):
            value = getattr(self, name)
            if value is None:
                raise FeatureSetMismatch(f"feature {name!r} not populated")
            out[i] = value
        return out

    def present(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self) if getattr(self, f.name) is not None)


def basic_stats(values) -> tuple[float, float, float, float, float]:
    """(mean, population sd, max, min, diff) of the 8 values."""
    v = np.asarray(values, dtype=float)
    vmax, vmin = float(v.max()), float(v.min())
    return float(v.mean()), pattern_sd(v), vmax, vmin, vmax - vmin


def cog(pattern: NormalizedFrame, geometry: SensorGeometry) -> float:
    """Intensity-weighted mean lateral position of the pattern, in cm."""
    v = pattern.values
    total = v.sum()
    if total <= 0.0:
        raise NoSignal("COG undefined for an all-zero pattern")
    return float((geometry.positions_cm * v).sum() / total)


def full_width_at(pattern: NormalizedFrame, fraction: float, geometry: SensorGeometry) -> float:
    """Width (cm) between the outermost crossings of level fraction*max.

    Crossings are linearly interpolated between adjacent photodiode positions;
    a side where the pattern is still above the level at the outermost
    photodiode clamps to that photodiode's position.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    v = pattern.values
    peak = v.max()
    if peak <= 0.0:
        raise NoSignal("width undefined for an all-zero pattern")
    level = fraction * peak
    pos = geometry.positions_cm
    above = np.flatnonzero(v >= level)
    first, last = above[0], above[-1]

    if first == 0:
        left = pos[0]
    else:
        # rising crossing between first-1 (below) and first (at/above)
        frac = (level - v[first - 1]) / (v[first] - v[first - 1])
        left = pos[first - 1] + frac * (pos[first] - pos[first - 1])
    if last == len(v) - 1:
        right = pos[-1]
    else:
        frac = (v[last] - level) / (v[last] - v[last + 1])
        right = pos[last] + frac * (pos[last + 1] - pos[last])
    return float(right - left)


def slope_angle(pattern: NormalizedFrame, geometry: SensorGeometry) -> float:
    """Arctangent (degrees) of the least-squares line slope of value vs position.

    The slope (volts/cm) is treated as a dimensionless ratio.
    """
    x = geometry.positions_cm
    y = pattern.values
    slope = float(((x - x.mean()) * (y - y.mean())).sum() / ((x - x.mean()) ** 2).sum())
    return math.degrees(math.atan(slope))


def weighted_moments(pattern: NormalizedFrame, geometry: SensorGeometry) -> tuple[float, float]:
    """(skewness, kurtosis) of the pattern viewed as a distribution over positions.

    Kurtosis is the plain fourth standardized moment (3.0 for a Gaussian),
    not excess kurtosis.
    """
    v = pattern.values
    total = v.sum()
    if total <= 0.0:
        raise NoSignal("moments undefined for an all-zero pattern")
    w = v / total
    x = geometry.positions_cm
    mu = float((w * x).sum())
    var = float((w * (x - mu) ** 2).sum())
    if var <= 0.0:
        raise DegenerateDistribution("all pattern weight on a single photodiode")
    m3 = float((w * (x - mu) ** 3).sum())
    m4 = float((w * (x - mu) ** 4).sum())
    return m3 / var ** 1.5, m4 / var ** 2


def value_moments(values) -> tuple[float, float]:
    """(skewness, kurtosis) of the 8 values themselves (configuration variant)."""
    v = np.asarray(values, dtype=float)
    mu = v.mean()
    var = float(((v - mu) ** 2).mean())
    if var <= 0.0:
        raise DegenerateDistribution("constant pattern has no value moments")
    m3 = float(((v - mu) ** 3).mean())
    m4 = float(((v - mu) ** 4).mean())
    return m3 / var ** 1.5, m4 / var ** 2


def count_features(values) -> tuple[int, int]:
    """(count of values strictly below 2*sd, count strictly above the mean)."""
    v = np.asarray(values, dtype=float)
    sd = pattern_sd(v)
    return int((v < 2.0 * sd).sum()), int((v > v.mean()).sum())


def extract(
    pattern: NormalizedFrame,
    feature_set: FeatureSet,
    geometry: SensorGeometry,
    moments_over_values: bool = False,
) -> FeatureVector:
    """Populate exactly the requested feature set from a normalized pattern.

    Raises NoSignal / DegenerateDistribution from the individual features when
    the pattern cannot support them.
    """
    names = feature_names_for(feature_set)
    out: dict[str, float] = {"rawmax": pattern.rawmax}

    mean, sd, vmax, vmin, diff = basic_stats(pattern.values)
    simple = {"mean": mean, "sd": sd, "max": vmax, "min": vmin, "diff": diff}
    for name in names:
        if name in simple:
            out[name] = simple[name]
    if "cog" in names:
        out["cog"] = cog(pattern, geometry)
    for name, frac in (("fw15", 0.15), ("fw50", 0.50), ("fw85", 0.85)):
        if name in names:
            out[name] = full_width_at(pattern, frac, geometry)
    if "slope_angle" in names:
        out["slope_angle"] = slope_angle(pattern, geometry)
    if "skewness" in names or "kurtosis" in names:
        if moments_over_values:
            skew, kurt = value_moments(pattern.values)
        else:
            skew, kurt = weighted_moments(pattern, geometry)
        if "skewness" in names:
            out["skewness"] = skew
        if "kurtosis" in names:
            out["kurtosis"] = kurt
    if "n_below_2sd" in names or "n_above_mean" in names:
        below, above = count_features(pattern.values)
        if "n_below_2sd" in names:
            out["n_below_2sd"] = float(below)
        if "n_above_mean" in names:
            out["n_above_mean"] = float(above)
    return FeatureVector(**out)
