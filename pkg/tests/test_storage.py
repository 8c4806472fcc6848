import numpy as np
import pytest

from optigest import Mode, gen_dataset, predict, roc_sweep
from optigest.errors import SchemaError
from optigest.power import power_report
from optigest.recipes import train_from_frames
from optigest.storage import (
    read_dataset_csv,
    read_scores_csv,
    load_model,
    save_model,
    write_dataset_csv,
    write_power_csv,
    write_roc_csv,
    write_scores_csv,
)


@pytest.fixture(scope="module")
def small_frames():
    return gen_dataset(4, Mode.PASSIVE, (700.0, 1460.0), seed=55)


def test_dataset_round_trip(tmp_path, geometry, small_frames):
    path = tmp_path / "frames.csv"
    write_dataset_csv(small_frames, path)
    loaded = read_dataset_csv(path, geometry)
    assert len(loaded) == len(small_frames)
    for original, restored in zip(small_frames, loaded):
        assert np.allclose(original.voltages, restored.voltages, atol=5e-5)
        assert restored.mode is original.mode
        assert restored.meta.true_pose is original.meta.true_pose
        assert restored.meta.width_mm == pytest.approx(original.meta.width_mm, abs=5e-3)


def test_dataset_write_is_reproducible(tmp_path, small_frames):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_dataset_csv(small_frames, a)
    write_dataset_csv(small_frames, b)
    assert a.read_bytes() == b.read_bytes()


def test_dataset_reader_rejects_wrong_version(tmp_path, geometry):
    path = tmp_path / "bad.csv"
    path.write_text("# optigest-csv v999 kind=dataset\nv0\n1.0\n")
    with pytest.raises(SchemaError):
        read_dataset_csv(path, geometry)


def test_dataset_reader_rejects_missing_header(tmp_path, geometry):
    path = tmp_path / "bad.csv"
    path.write_text("v0,v1\n1.0,2.0\n")
    with pytest.raises(SchemaError):
        read_dataset_csv(path, geometry)


def test_dataset_reader_rejects_wrong_columns(tmp_path, geometry):
    path = tmp_path / "bad.csv"
    path.write_text("# optigest-csv v1 kind=dataset\nv0,v1\n1.0,2.0\n")
    with pytest.raises(SchemaError):
        read_dataset_csv(path, geometry)


def test_dataset_reader_rejects_garbage_row(tmp_path, geometry, small_frames):
    path = tmp_path / "bad.csv"
    write_dataset_csv(small_frames, path)
    lines = path.read_text().splitlines()
    lines[2] = lines[2].replace(lines[2].split(",")[0], "not-a-number", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError):
        read_dataset_csv(path, geometry)


def test_scores_round_trip(tmp_path):
    scores = np.array([0.12, 0.6, 1.75, 3.4])
    is_dark = np.array([True, True, False, False])
    path = tmp_path / "scores.csv"
    write_scores_csv(scores, is_dark, path)
    loaded_scores, loaded_dark = read_scores_csv(path)
    assert np.allclose(loaded_scores, scores)
    assert np.array_equal(loaded_dark, is_dark)


def test_scores_reader_rejects_bad_label(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text(
        "# optigest-csv v1 kind=scores\nrawmax,label\n0.5,dusk\n"
    )
    with pytest.raises(SchemaError):
        read_scores_csv(path)


def test_roc_csv_written_with_header(tmp_path):
    curve = roc_sweep([0.1, 0.5, 1.0, 2.0], [True, True, False, False])
    path = tmp_path / "roc.csv"
    write_roc_csv(curve, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# optigest-csv v1 kind=roc"
    assert lines[1] == "threshold,tp,fn,fp,tn,sensitivity,specificity"
    assert len(lines) == 2 + 381


def test_power_csv_contains_rows_and_savings(tmp_path):
    rows, savings = power_report()
    path = tmp_path / "power.csv"
    write_power_csv(rows, savings, path)
    text = path.read_text()
    assert "stronger" in text and "average" in text
    assert "93.34" in text


def test_model_round_trip(tmp_path, geometry):
    frames = gen_dataset(40, Mode.PASSIVE, (700.0, 1460.0), seed=56)
    model, _, _ = train_from_frames(frames, geometry, seed=56, hidden_dim=6,
                                    max_epochs=40)
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.mode is model.mode
    assert loaded.feature_names == model.feature_names
    assert loaded.hidden_dim == model.hidden_dim
    for key in model.params:
        assert np.array_equal(loaded.params[key], model.params[key])
    rng = np.random.default_rng(57)
    for _ in range(20):
        x = rng.normal(1.0, 0.5, len(model.feature_names))
        pose_a, probs_a = predict(model, x)
        pose_b, probs_b = predict(loaded, x)
        assert pose_a is pose_b
        assert np.array_equal(probs_a, probs_b)


def test_model_save_is_reproducible(tmp_path, geometry):
    frames = gen_dataset(20, Mode.PASSIVE, (700.0,), seed=58)
    model, _, _ = train_from_frames(frames, geometry, seed=58, hidden_dim=4,
                                    max_epochs=20)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_model(model, a)
    save_model(model, b)
    assert a.read_bytes() == b.read_bytes()


def test_model_loader_rejects_bad_schema(tmp_path):
    path = tmp_path / "model.json"
    path.write_text('{"schema": "something-else"}')
    with pytest.raises(SchemaError):
        load_model(path)


def test_model_loader_rejects_invalid_json(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_model(path)
