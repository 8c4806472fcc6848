import numpy as np
import pytest

from optigest import Mode, SensorGeometry, Thresholds, gen_dataset
from optigest.recipes import train_from_frames

PASSIVE_LUX = (230.0, 700.0, 1460.0, 2200.0)
ACTIVE_LUX = (0.0,)


@pytest.fixture(scope="session")
def geometry():
    return SensorGeometry()


@pytest.fixture(scope="session")
def thresholds():
    return Thresholds()


@pytest.fixture(scope="session")
def passive_frames_6000():
    """The full-size synthetic passive dataset used by the acceptance suite."""
    return gen_dataset(2000, Mode.PASSIVE, PASSIVE_LUX, seed=2024)


@pytest.fixture(scope="session")
def trained_pann(passive_frames_6000, geometry):
    """pANN trained once per session: (model, held-out report, split sizes)."""
    return train_from_frames(passive_frames_6000, geometry, seed=2024)


@pytest.fixture(scope="session")
def active_test_frames():
    return gen_dataset(300, Mode.ACTIVE, ACTIVE_LUX, seed=2025)


@pytest.fixture(scope="session")
def mini_pann(geometry):
    """Small, fast passive model for controller/pipeline tests."""
    frames = gen_dataset(80, Mode.PASSIVE, PASSIVE_LUX, seed=5)
    model, report, _ = train_from_frames(
        frames, geometry, seed=5, hidden_dim=10, max_epochs=120,
    )
    assert report.accuracy > 0.9  # sanity: fixtures must be usable
    return model


def random_voltages(rng, n=8, v_max=3.8):
    return rng.uniform(0.0, v_max, n)
