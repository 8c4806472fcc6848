import numpy as np
import pytest

from optigest import (
    Mode,
    normalize_active,
    normalize_frame,
    normalize_passive,
    pattern_sd,
    validate_frame,
)
from optigest.errors import ModeMismatch


def active(geometry, values):
    return validate_frame(values, geometry, Mode.ACTIVE)


def passive(geometry, values):
    return validate_frame(values, geometry, Mode.PASSIVE)


def test_active_example(geometry):
    # element-wise v - min(v) by hand
    n = normalize_active(active(geometry, [1.0, 1.2, 2.0, 3.0, 2.0, 1.2, 1.0, 1.0]))
    assert np.allclose(n.values, [0, 0.2, 1.0, 2.0, 1.0, 0.2, 0, 0])
    assert n.rawmax == 3.0
    assert n.source_mode is Mode.ACTIVE


def test_active_constant_frame(geometry):
    n = normalize_active(active(geometry, [1.7] * 8))
    assert np.array_equal(n.values, np.zeros(8))
    assert n.rawmax == 1.7


def test_active_zero_frame(geometry):
    n = normalize_active(active(geometry, [0.0] * 8))
    assert np.array_equal(n.values, np.zeros(8))
    assert n.rawmax == 0.0


def test_passive_example(geometry):
    # element-wise max(v) - v by hand
    n = normalize_passive(passive(geometry, [3.0, 3.0, 2.5, 1.8, 2.5, 3.0, 3.0, 3.0]))
    assert np.allclose(n.values, [0, 0, 0.5, 1.2, 0.5, 0, 0, 0])
    assert n.rawmax == 3.0


def test_passive_constant_frame(geometry):
    n = normalize_passive(passive(geometry, [2.2] * 8))
    assert np.array_equal(n.values, np.zeros(8))


def test_passive_single_dip_becomes_single_bump(geometry):
    n = normalize_passive(passive(geometry, [3.0, 3.0, 3.0, 3.0, 2.1, 3.0, 3.0, 3.0]))
    assert n.values[4] == pytest.approx(0.9)
    assert np.count_nonzero(n.values) == 1


def test_mode_mismatch(geometry):
    with pytest.raises(ModeMismatch):
        normalize_active(passive(geometry, [1.0] * 8))
    with pytest.raises(ModeMismatch):
        normalize_passive(active(geometry, [1.0] * 8))


def test_dispatch_matches_mode(geometry):
    raw = passive(geometry, [3.0, 2.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0])
    assert np.array_equal(normalize_frame(raw).values, normalize_passive(raw).values)


def test_min_zero_and_nonnegative_for_random_frames(geometry):
    rng = np.random.default_rng(31)
    for _ in range(200):
        v = rng.uniform(0, 3.8, 8)
        for norm in (
            normalize_active(active(geometry, v)),
            normalize_passive(passive(geometry, v)),
        ):
            assert norm.values.min() == 0.0
            assert np.all(norm.values >= 0.0)
            assert norm.rawmax == pytest.approx(v.max())


def test_sd_preserved_by_both_normalizations(geometry):
    rng = np.random.default_rng(32)
    for _ in range(100):
        v = rng.uniform(0, 3.8, 8)
        assert pattern_sd(normalize_active(active(geometry, v)).values) == pytest.approx(
            pattern_sd(v)
        )
        assert pattern_sd(normalize_passive(passive(geometry, v)).values) == pytest.approx(
            pattern_sd(v)
        )


def test_passive_equals_active_of_reflected_frame(geometry):
    # max(v) - v == (c - v) - min(c - v) for any constant c
    rng = np.random.default_rng(33)
    for _ in range(100):
        v = rng.uniform(0, 3.0, 8)
        c = 3.5
        reflected = normalize_active(active(geometry, c - v))
        inverted = normalize_passive(passive(geometry, v))
        assert np.allclose(reflected.values, inverted.values)


def test_active_normalization_idempotent(geometry):
    rng = np.random.default_rng(34)
    for _ in range(50):
        v = rng.uniform(0, 3.8, 8)
        once = normalize_active(active(geometry, v))
        twice = normalize_active(active(geometry, once.values))
        assert np.array_equal(once.values, twice.values)
