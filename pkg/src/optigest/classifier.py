"""Pose classification: a from-scratch single-hidden-layer network, plus
correlation-based feature selection and an information-gain stump for the
light-condition split.

Training is deterministic mini-batch gradient descent with momentum and a
seeded init, chosen for reproducibility: the same seed and data give
bit-identical weights. Inputs are standardized with constants computed on the
training split only; the constants travel with the model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySplit,
    FeatureSetMismatch,
    NonFiniteLoss,
    SingleClass,
    TooFewFeatures,
)
from .features import FeatureSet, FeatureVector, extract, feature_names_for
from .frames import Mode, POSE_ORDER, PoseClass, RawDataFrame, SensorGeometry
from .normalize import normalize_frame

DEFAULT_HIDDEN = {Mode.ACTIVE: 22, Mode.PASSIVE: 25}


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature rows with pose labels; frames kept as provenance."""

    mode: Mode
    feature_names: tuple[str, ...]
    features: np.ndarray          # (n, d)
    labels: np.ndarray            # (n,) indices into POSE_ORDER
    frames: tuple[RawDataFrame, ...] = ()

    def __post_init__(self):
        if len(self.features) == 0:
            raise ValueError("dataset must be non-empty")
        if self.features.shape[1] != len(self.feature_names):
            raise ValueError("feature matrix width does not match feature names")

    def __len__(self) -> int:
        return len(self.features)

    def take(self, indices: np.ndarray) -> "LabeledDataset":
        frames = tuple(self.frames[i] for i in indices) if self.frames else ()
        return LabeledDataset(
            self.mode, self.feature_names,
            self.features[indices], self.labels[indices], frames,
        )

    def columns(self, names: tuple[str, ...]) -> np.ndarray:
        """Feature sub-matrix in the given column order."""
        missing = [n for n in names if n not in self.feature_names]
        if missing:
            raise FeatureSetMismatch(f"dataset lacks features {missing}")
        index = [self.feature_names.index(n) for n in names]
        return self.features[:, index]


def dataset_from_frames(
    frames,
    geometry: SensorGeometry,
    feature_set: FeatureSet = FeatureSet.ALL,
) -> LabeledDataset:
    """Normalize each frame per its mode and extract the feature rows."""
    frames = tuple(frames)
    if not frames:
        raise ValueError("no frames")
    names = feature_names_for(feature_set)
    rows = np.empty((len(frames), len(names)))
    labels = np.empty(len(frames), dtype=int)
    for i, frame in enumerate(frames):
        if frame.meta is None or frame.meta.true_pose is None:
            raise ValueError(f"frame {i} carries no pose label")
        rows[i] = extract(normalize_frame(frame), feature_set, geometry).as_array(names)
        labels[i] = POSE_ORDER.index(frame.meta.true_pose)
    return LabeledDataset(frames[0].mode, names, rows, labels, frames)


def split(
    dataset: LabeledDataset,
    ratios: tuple[float, float, float] = (0.7, 0.15, 0.15),
    seed: int = 0,
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Deterministic shuffled partition, stratified by class."""
    if not math.isclose(sum(ratios), 1.0, abs_tol=1e-9):
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    rng = np.random.default_rng(seed)
    parts: list[list[np.ndarray]] = [[], [], []]
    for c in range(len(POSE_ORDER)):
        idx = np.flatnonzero(dataset.labels == c)
        if len(idx) == 0:
            continue
        idx = rng.permutation(idx)
        n_train = round(ratios[0] * len(idx))
        n_val = round(ratios[1] * len(idx))
        n_val = min(n_val, len(idx) - n_train)
        parts[0].append(idx[:n_train])
        parts[1].append(idx[n_train:n_train + n_val])
        parts[2].append(idx[n_train + n_val:])
    splits = []
    for name, chunks in zip(("train", "validation", "test"), parts):
        merged = np.concatenate(chunks) if chunks else np.array([], dtype=int)
        if len(merged) == 0:
            raise EmptySplit(f"{name} split came out empty")
        splits.append(dataset.take(np.sort(merged)))
    return splits[0], splits[1], splits[2]


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xd = x - x.mean()
    yd = y - y.mean()
    denom = math.sqrt(float((xd ** 2).sum()) * float((yd ** 2).sum()))
    if denom == 0.0:
        return 0.0
    return float((xd * yd).sum() / denom)


def select_features(train: LabeledDataset, k: int) -> tuple[str, ...]:
    """Top-k features by mean absolute one-vs-rest point-biserial correlation.

    Candidates are taken in rank order; a candidate is skipped when its
    absolute correlation with an already-kept feature exceeds 0.95.
    """
    names = train.feature_names
    if k > len(names):
        raise TooFewFeatures(f"asked for {k} of {len(names)} features")
    X = train.features
    scores = []
    for j, name in enumerate(names):
        rs = [
            abs(_pearson(X[:, j], (train.labels == c).astype(float)))
            for c in range(len(POSE_ORDER))
        ]
        scores.append((float(np.mean(rs)), name, j))
    scores.sort(key=lambda t: (-t[0], t[1]))

    kept: list[tuple[str, int]] = []
    for _score, name, j in scores:
        if any(abs(_pearson(X[:, j], X[:, jk])) > 0.95 for _, jk in kept):
            continue
        kept.append((name, j))
        if len(kept) == k:
            return tuple(name for name, _ in kept)
    raise TooFewFeatures(
        f"only {len(kept)} non-redundant features available, asked for {k}"
    )


# --- network internals (exposed for gradient checking) ---

def mlp_init(n_in: int, n_hidden: int, n_out: int, rng: np.random.Generator) -> dict:
    """Weights uniform in +/-1/sqrt(fan_in), biases zero."""
    lim1 = 1.0 / math.sqrt(n_in)
    lim2 = 1.0 / math.sqrt(n_hidden)
    return {
        "w1": rng.uniform(-lim1, lim1, (n_in, n_hidden)),
        "b1": np.zeros(n_hidden),
        "w2": rng.uniform(-lim2, lim2, (n_hidden, n_out)),
        "b2": np.zeros(n_out),
    }


def mlp_forward(params: dict, x: np.ndarray) -> np.ndarray:
    """Class probabilities: tanh hidden layer, softmax output."""
    hidden = np.tanh(x @ params["w1"] + params["b1"])
    logits = hidden @ params["w2"] + params["b2"]
    logits = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(logits)
    return exps / exps.sum(axis=-1, keepdims=True)


def mlp_loss(params: dict, x: np.ndarray, y_onehot: np.ndarray) -> float:
    """Mean cross-entropy over the batch."""
    probs = mlp_forward(params, x)
    return float(-(y_onehot * np.log(probs + 1e-300)).sum() / len(x))


def mlp_loss_and_grads(params: dict, x: np.ndarray, y_onehot: np.ndarray) -> tuple[float, dict]:
    n = len(x)
    hidden = np.tanh(x @ params["w1"] + params["b1"])
    logits = hidden @ params["w2"] + params["b2"]
    logits = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(logits)
    probs = exps / exps.sum(axis=-1, keepdims=True)
    loss = float(-(y_onehot * np.log(probs + 1e-300)).sum() / n)

    d_logits = (probs - y_onehot) / n
    d_hidden = d_logits @ params["w2"].T * (1.0 - hidden ** 2)
    grads = {
        "w2": hidden.T @ d_logits,
        "b2": d_logits.sum(axis=0),
        "w1": x.T @ d_hidden,
        "b1": d_hidden.sum(axis=0),
    }
    return loss, grads


@dataclass(frozen=True, eq=False)
class PoseModel:
    """Trained pose network plus its feature contract and scaling constants.

    feature_names is the binding contract; feature_set is None for a custom
    feature list.
    """

    mode: Mode
    feature_set: FeatureSet | None
    feature_names: tuple[str, ...]
    hidden_dim: int
    params: dict
    feat_mean: np.ndarray
    feat_sd: np.ndarray
    seed: int
    epochs_run: int = 0
    best_epoch: int = 0
    train_loss: float = float("nan")
    validation_loss: float = float("nan")

    @property
    def input_dim(self) -> int:
        return len(self.feature_names)

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.feat_mean) / self.feat_sd


def train_mlp(
    train: LabeledDataset,
    validation: LabeledDataset,
    hidden_dim: int | None = None,
    seed: int = 0,
    *,
    features: FeatureSet | tuple[str, ...] | None = None,
    learning_rate: float = 0.01,
    momentum: float = 0.9,
    batch_size: int = 32,
    max_epochs: int = 500,
    patience: int = 20,
) -> PoseModel:
    """Seeded mini-batch training with early stopping on validation loss.

    features picks the input columns: the per-mode nine by default, a
    FeatureSet, or a custom name tuple (e.g. from select_features). Returns
    the best-validation weights; a zero epoch budget returns the freshly
    initialized network.
    """
    if len(train) == 0 or len(validation) == 0:
        raise EmptySplit("train and validation splits must be non-empty")
    if features is None:
        features = (
            FeatureSet.ACTIVE_NINE if train.mode is Mode.ACTIVE else FeatureSet.PASSIVE_NINE
        )
    if isinstance(features, FeatureSet):
        feature_set = features
        names = feature_names_for(features)
    else:
        feature_set = None
        names = tuple(features)
    if hidden_dim is None:
        hidden_dim = DEFAULT_HIDDEN[train.mode]

    x_train = train.columns(names)
    x_val = validation.columns(names)
    if not (np.all(np.isfinite(x_train)) and np.all(np.isfinite(x_val))):
        raise NonFiniteLoss("non-finite feature values make the loss undefined")
    feat_mean = x_train.mean(axis=0)
    feat_sd = x_train.std(axis=0)
    if np.any(feat_sd <= 0):
        dead = [names[j] for j in np.flatnonzero(feat_sd <= 0)]
        raise ValueError(f"constant training features cannot be standardized: {dead}")
    x_train = (x_train - feat_mean) / feat_sd
    x_val = (x_val - feat_mean) / feat_sd

    n_classes = len(POSE_ORDER)
    y_train = np.eye(n_classes)[train.labels]
    y_val = np.eye(n_classes)[validation.labels]

    rng = np.random.default_rng(seed)
    params = mlp_init(len(names), hidden_dim, n_classes, rng)
    velocity = {key: np.zeros_like(value) for key, value in params.items()}

    best_params = {key: value.copy() for key, value in params.items()}
    best_val = mlp_loss(params, x_val, y_val)
    best_epoch = 0
    stale = 0
    epoch = 0
    last_train_loss = mlp_loss(params, x_train, y_train)

    for epoch in range(1, max_epochs + 1):
        order = rng.permutation(len(x_train))
        for start in range(0, len(order), batch_size):
            batch = order[start:start + batch_size]
            loss, grads = mlp_loss_and_grads(params, x_train[batch], y_train[batch])
            if not math.isfinite(loss):
                raise NonFiniteLoss(f"training loss diverged at epoch {epoch}")
            for key in params:
                velocity[key] = momentum * velocity[key] - learning_rate * grads[key]
                params[key] = params[key] + velocity[key]
        last_train_loss = mlp_loss(params, x_train, y_train)
        val_loss = mlp_loss(params, x_val, y_val)
        if not math.isfinite(val_loss):
            raise NonFiniteLoss(f"validation loss diverged at epoch {epoch}")
        if val_loss < best_val:
            best_val = val_loss
            best_params = {key: value.copy() for key, value in params.items()}
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= patience:
                break

    return PoseModel(
        mode=train.mode,
        feature_set=feature_set,
        feature_names=names,
        hidden_dim=hidden_dim,
        params=best_params,
        feat_mean=feat_mean,
        feat_sd=feat_sd,
        seed=seed,
        epochs_run=epoch,
        best_epoch=best_epoch,
        train_loss=last_train_loss,
        validation_loss=best_val,
    )


def search_topology(
    train: LabeledDataset,
    validation: LabeledDataset,
    hidden_sizes,
    seed: int = 0,
    **train_kwargs,
) -> tuple[PoseModel, list[tuple[int, float]]]:
    """Try several hidden sizes, keep the best validation loss."""
    results = []
    best: PoseModel | None = None
    for size in hidden_sizes:
        model = train_mlp(train, validation, hidden_dim=size, seed=seed, **train_kwargs)
        results.append((size, model.validation_loss))
        if best is None or model.validation_loss < best.validation_loss:
            best = model
    return best, results


def predict(model: PoseModel, features) -> tuple[PoseClass, np.ndarray]:
    """(pose, class probabilities); ties resolve to the earliest class."""
    if isinstance(features, FeatureVector):
        x = features.as_array(model.feature_names)
    else:
        x = np.asarray(features, dtype=float)
        if x.shape != (len(model.feature_names),):
            raise FeatureSetMismatch(
                f"expected {len(model.feature_names)} features, got shape {x.shape}"
            )
    probs = mlp_forward(model.params, model.standardize(x)[None, :])[0]
    return POSE_ORDER[int(np.argmax(probs))], probs


@dataclass(frozen=True, eq=False)
class EvalReport:
    accuracy: float
    confusion: np.ndarray  # rows: true class, columns: predicted
    class_order: tuple[PoseClass, ...] = POSE_ORDER


def evaluate(model: PoseModel, test: LabeledDataset) -> EvalReport:
    x = model.standardize(test.columns(model.feature_names))
    probs = mlp_forward(model.params, x)
    predicted = probs.argmax(axis=1)
    n_classes = len(POSE_ORDER)
    confusion = np.zeros((n_classes, n_classes), dtype=int)
    for true, pred in zip(test.labels, predicted):
        confusion[true, pred] += 1
    return EvalReport(accuracy=float(confusion.trace() / len(test)), confusion=confusion)


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def train_stump(scores, is_dark) -> float:
    """Single-split threshold maximizing information gain; dark iff score < t.

    Candidates are midpoints between adjacent sorted distinct scores; gain
    ties resolve to the lowest midpoint.
    """
    s = np.asarray(scores, dtype=float)
    d = np.asarray(is_dark, dtype=bool)
    if d.all() or not d.any():
        raise SingleClass("need both dark and bright samples to split")
    distinct = np.unique(s)
    if len(distinct) < 2:
        raise SingleClass("all scores identical, nothing to split on")
    midpoints = (distinct[:-1] + distinct[1:]) / 2.0

    parent = _entropy(np.array([d.sum(), (~d).sum()]))
    best_gain = -1.0
    best_threshold = midpoints[0]
    n = len(s)
    for t in midpoints:
        left = s < t
        left_counts = np.array([(d & left).sum(), (~d & left).sum()])
        right_counts = np.array([(d & ~left).sum(), (~d & ~left).sum()])
        weighted = (
            left_counts.sum() / n * _entropy(left_counts)
            + right_counts.sum() / n * _entropy(right_counts)
        )
        gain = parent - weighted
        if gain > best_gain:
            best_gain = gain
            best_threshold = float(t)
    return best_threshold
