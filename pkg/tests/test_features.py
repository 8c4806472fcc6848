import math

import numpy as np
import pytest

from optigest import (
    ACTIVE_NINE,
    FeatureSet,
    Mode,
    NormalizedFrame,
    PASSIVE_NINE,
    basic_stats,
    cog,
    count_features,
    extract,
    full_width_at,
    slope_angle,
    weighted_moments,
)
from optigest.errors import DegenerateDistribution, FeatureSetMismatch, NoSignal


def pattern(values, rawmax=None, mode=Mode.PASSIVE):
    values = np.asarray(values, dtype=float)
    return NormalizedFrame(values, float(values.max() if rawmax is None else rawmax), mode)


# --- independent oracles ---

def oracle_sd(values):
    mu = sum(values) / len(values)
    return math.sqrt(sum((v - mu) ** 2 for v in values) / len(values))


def oracle_cog(values, positions):
    total = sum(values)
    return sum(p * v for p, v in zip(positions, values)) / total


def oracle_width(values, positions, fraction, samples=200001):
    """Outermost level crossings found by scanning a dense piecewise-linear grid."""
    level = fraction * max(values)
    xs = np.linspace(positions[0], positions[-1], samples)
    ys = np.interp(xs, positions, values)
    above = np.flatnonzero(ys >= level)
    return xs[above[-1]] - xs[above[0]]


def oracle_moments(values, positions):
    total = sum(values)
    w = [v / total for v in values]
    mu = sum(wi * x for wi, x in zip(w, positions))
    var = sum(wi * (x - mu) ** 2 for wi, x in zip(w, positions))
    m3 = sum(wi * (x - mu) ** 3 for wi, x in zip(w, positions))
    m4 = sum(wi * (x - mu) ** 4 for wi, x in zip(w, positions))
    return m3 / var ** 1.5, m4 / var ** 2


# --- basic_stats ---

def test_basic_stats_example():
    mean, sd, vmax, vmin, diff = basic_stats([1, 1, 1, 1, 1, 1, 1, 3])
    assert mean == pytest.approx(1.25)
    assert sd == pytest.approx(0.6614, abs=1e-4)
    assert sd == pytest.approx(oracle_sd([1, 1, 1, 1, 1, 1, 1, 3]))
    assert diff == pytest.approx(2.0)


def test_basic_stats_constant():
    _, sd, _, _, diff = basic_stats([0.7] * 8)
    assert sd == 0.0
    assert diff == 0.0


def test_basic_stats_extremes_at_saturation():
    _, _, vmax, vmin, diff = basic_stats([0, 0, 0, 0, 0, 0, 0, 3.8])
    assert (vmax, vmin, diff) == (3.8, 0.0, 3.8)


# --- cog ---

def test_cog_symmetric_pattern_is_centered(geometry):
    assert cog(pattern([0, 0, 1, 2, 2, 1, 0, 0]), geometry) == pytest.approx(0.0)


def test_cog_two_equal_weights(geometry):
    # weighted mean of positions 0.5 and 1.5
    p = pattern([0, 0, 0, 0, 1, 1, 0, 0])
    assert cog(p, geometry) == pytest.approx(1.0)
    assert cog(p, geometry) == pytest.approx(
        oracle_cog(p.values, geometry.positions_cm)
    )


def test_cog_zero_pattern_raises(geometry):
    with pytest.raises(NoSignal):
        cog(pattern([0.0] * 8), geometry)


def test_cog_stays_inside_sensor_span(geometry):
    rng = np.random.default_rng(41)
    for _ in range(300):
        v = rng.uniform(0, 1, 8)
        assert -3.5 <= cog(pattern(v), geometry) <= 3.5


# --- full_width_at ---

def test_width_half_max_example(geometry):
    p = pattern([0, 0, 1, 2, 1, 0, 0, 0])
    # crossings at -1.5 and +0.5
    assert full_width_at(p, 0.5, geometry) == pytest.approx(2.0)
    assert full_width_at(p, 0.5, geometry) == pytest.approx(
        oracle_width(p.values, geometry.positions_cm, 0.5), abs=1e-4
    )


def test_width_85_example(geometry):
    p = pattern([0, 0, 1, 2, 1, 0, 0, 0])
    # level 1.7, crossings at -0.8 and -0.2
    assert full_width_at(p, 0.85, geometry) == pytest.approx(0.6)
    assert full_width_at(p, 0.85, geometry) == pytest.approx(
        oracle_width(p.values, geometry.positions_cm, 0.85), abs=1e-4
    )


def test_width_plateau_clamps_to_span(geometry):
    assert full_width_at(pattern([0.4] * 8), 0.5, geometry) == pytest.approx(7.0)


def test_width_zero_pattern_raises(geometry):
    with pytest.raises(NoSignal):
        full_width_at(pattern([0.0] * 8), 0.5, geometry)


def test_width_matches_oracle_on_random_patterns(geometry):
    rng = np.random.default_rng(42)
    for _ in range(100):
        v = rng.uniform(0, 2, 8)
        for fraction in (0.15, 0.5, 0.85):
            assert full_width_at(pattern(v), fraction, geometry) == pytest.approx(
                oracle_width(v, geometry.positions_cm, fraction), abs=1e-3
            )


def test_width_monotone_in_fraction(geometry):
    rng = np.random.default_rng(43)
    fractions = [0.1, 0.25, 0.5, 0.75, 0.9]
    for _ in range(100):
        v = rng.uniform(0, 2, 8)
        widths = [full_width_at(pattern(v), f, geometry) for f in fractions]
        assert all(a >= b - 1e-12 for a, b in zip(widths, widths[1:]))


# --- slope_angle ---

def test_slope_flat_pattern(geometry):
    assert slope_angle(pattern([0.9] * 8), geometry) == pytest.approx(0.0)


def test_slope_unit_ramp_is_45_degrees(geometry):
    v = geometry.positions_cm + 3.5
    assert slope_angle(pattern(v), geometry) == pytest.approx(45.0)


def test_slope_mirrored_ramp_is_minus_45(geometry):
    v = (geometry.positions_cm + 3.5)[::-1]
    assert slope_angle(pattern(v.copy()), geometry) == pytest.approx(-45.0)


# --- weighted_moments ---

def test_moments_symmetric_pattern_has_zero_skew(geometry):
    skew, _ = weighted_moments(pattern([0, 0, 1, 2, 2, 1, 0, 0]), geometry)
    assert skew == pytest.approx(0.0, abs=1e-12)


def test_moments_two_point_distribution_kurtosis_one(geometry):
    # equal weights at +/-1.5 cm: m4/m2^2 = 1
    skew, kurt = weighted_moments(pattern([0, 0, 1, 0, 0, 1, 0, 0]), geometry)
    assert kurt == pytest.approx(1.0)
    assert skew == pytest.approx(0.0, abs=1e-12)


def test_moments_single_pd_degenerate(geometry):
    with pytest.raises(DegenerateDistribution):
        weighted_moments(pattern([0, 0, 0, 2, 0, 0, 0, 0]), geometry)


def test_moments_zero_pattern(geometry):
    with pytest.raises(NoSignal):
        weighted_moments(pattern([0.0] * 8), geometry)


def test_moments_match_oracle(geometry):
    rng = np.random.default_rng(44)
    for _ in range(100):
        v = rng.uniform(0.01, 2, 8)
        skew, kurt = weighted_moments(pattern(v), geometry)
        o_skew, o_kurt = oracle_moments(v, geometry.positions_cm)
        assert skew == pytest.approx(o_skew)
        assert kurt == pytest.approx(o_kurt)


# --- count_features ---

def test_counts_constant_frame():
    # 2*sd = 0 and nothing strictly below it; nothing above the mean either
    assert count_features([1.1] * 8) == (0, 0)


def test_counts_bump_pattern():
    # population sd 0.7071, 2sd 1.4142, mean 0.5: seven below, three above
    below, above = count_features([0, 0, 1, 2, 1, 0, 0, 0])
    sd = oracle_sd([0, 0, 1, 2, 1, 0, 0, 0])
    assert sd == pytest.approx(0.70710678)
    assert below == sum(1 for v in [0, 0, 1, 2, 1, 0, 0, 0] if v < 2 * sd) == 7
    assert above == 3


def test_counts_single_peak():
    # only the saturated peak exceeds the mean of 0.475
    _, above = count_features([0, 0, 0, 0, 0, 0, 0, 3.8])
    assert above == 1


def test_counts_scale_invariant():
    rng = np.random.default_rng(45)
    for _ in range(100):
        v = rng.uniform(0, 2, 8)
        assert count_features(v) == count_features(3.7 * v)


# --- extract ---

def test_extract_passive_nine_populates_exact_set(geometry):
    p = pattern([0, 0, 0.5, 1.2, 0.5, 0, 0, 0], rawmax=3.0)
    fv = extract(p, FeatureSet.PASSIVE_NINE, geometry)
    assert set(PASSIVE_NINE) <= set(fv.present())
    # symmetric about PD index 3 at -0.5 cm
    assert fv.cog == pytest.approx(-0.5)
    assert fv.cog == pytest.approx(oracle_cog(p.values, geometry.positions_cm))
    assert fv.rawmax == 3.0
    assert fv.sd is None and fv.max is None  # not in the passive nine


def test_extract_active_nine_has_sd_not_skewness(geometry):
    fv = extract(pattern([0, 0, 1, 2, 2, 1, 0, 0]), FeatureSet.ACTIVE_NINE, geometry)
    assert fv.sd is not None
    assert fv.skewness is None
    assert set(ACTIVE_NINE) <= set(fv.present())


def test_extract_zero_pattern_raises(geometry):
    with pytest.raises(NoSignal):
        extract(pattern([0.0] * 8), FeatureSet.PASSIVE_NINE, geometry)


def test_extract_all_has_every_feature(geometry):
    fv = extract(pattern([0, 0.1, 1, 2, 1.5, 0.3, 0, 0]), FeatureSet.ALL, geometry)
    assert len(fv.present()) == 15


def test_as_array_missing_feature_raises(geometry):
    fv = extract(pattern([0, 0, 1, 2, 2, 1, 0, 0]), FeatureSet.ACTIVE_NINE, geometry)
    with pytest.raises(FeatureSetMismatch):
        fv.as_array(("fw15",))


def test_diff_equals_max_minus_min(geometry):
    rng = np.random.default_rng(46)
    for _ in range(50):
        fv = extract(pattern(rng.uniform(0.01, 2, 8)), FeatureSet.ALL, geometry)
        assert fv.diff == pytest.approx(fv.max - fv.min)
        assert 0 <= fv.n_below_2sd <= 8 and 0 <= fv.n_above_mean <= 8
        assert 0 <= fv.fw50 <= 7.0


# --- mirror and scaling laws ---

def test_mirror_laws(geometry):
    rng = np.random.default_rng(47)
    for _ in range(100):
        v = rng.uniform(0.01, 2, 8)
        fv = extract(pattern(v), FeatureSet.ALL, geometry)
        mv = extract(pattern(v[::-1].copy()), FeatureSet.ALL, geometry)
        assert mv.cog == pytest.approx(-fv.cog)
        assert mv.skewness == pytest.approx(-fv.skewness)
        assert mv.sd == pytest.approx(fv.sd)
        assert mv.kurtosis == pytest.approx(fv.kurtosis)
        assert mv.fw50 == pytest.approx(fv.fw50)
        assert mv.fw85 == pytest.approx(fv.fw85)


def test_scale_invariant_features(geometry):
    rng = np.random.default_rng(48)
    for _ in range(100):
        v = rng.uniform(0.01, 1, 8)
        a = extract(pattern(v), FeatureSet.ALL, geometry)
        b = extract(pattern(2.9 * v, rawmax=float((2.9 * v).max())), FeatureSet.ALL, geometry)
        for name in ("cog", "fw15", "fw50", "fw85", "skewness", "kurtosis",
                     "n_below_2sd", "n_above_mean"):
            assert getattr(b, name) == pytest.approx(getattr(a, name)), name
        # and the scale-dependent ones do scale
        assert b.mean == pytest.approx(2.9 * a.mean)
        assert b.sd == pytest.approx(2.9 * a.sd)
        assert b.diff == pytest.approx(2.9 * a.diff)
