"""Candidate scoring: linear epsilon-insensitive SVR, least-squares gradient
boosted regression trees (MART), and their average.

Both regressors are trained on 0/1 labels and their outputs are clamped to
[0, 1], so the ensemble score is also in [0, 1].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyTrainingSet
from .features import NUM_FEATURES, FeatureVector, LinkContext

logger = logging.getLogger(__name__)


# -- training data ----------------------------------------------------------


@dataclass(frozen=True)
class LabeledQuery:
    query_id: str
    text: str
    gold: frozenset[str]


@dataclass(frozen=True)
class TrainingExample:
    features: FeatureVector
    label: float
    query_id: str
    entity_id: str

    def __post_init__(self):
        if self.label not in (0.0, 1.0):
            raise ValueError(f"label must be 0.0 or 1.0, got {self.label!r}")


@dataclass
class CoverageReport:
    gold_total: int = 0
    gold_found: int = 0
    missed: list[tuple[str, str]] = field(default_factory=list)
    unknown: list[tuple[str, str]] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        return self.gold_found / self.gold_total if self.gold_total else 1.0

    def summary(self) -> str:
        return (
            f"gold coverage {self.gold_found}/{self.gold_total} ({self.coverage:.3f}); "
            f"{len(self.missed)} missed, {len(self.unknown)} not in KB"
        )


def build_training_set(
    labeled_queries: Iterable[LabeledQuery], ctx: LinkContext
) -> tuple[list[TrainingExample], CoverageReport]:
    """Label every retrieved candidate 1.0 if it is a gold entity of its query,
    else 0.0."""
    examples: list[TrainingExample] = []
    report = CoverageReport()
    for lq in labeled_queries:
        featurized = ctx.featurize(lq.text)
        retrieved = {ref.entity_id for ref, _ in featurized}
        for eid in sorted(lq.gold):
            report.gold_total += 1
            if eid in retrieved:
                report.gold_found += 1
            else:
                report.missed.append((lq.query_id, eid))
                if eid not in ctx.kb:
                    report.unknown.append((lq.query_id, eid))
        for ref, fv in featurized:
            label = 1.0 if ref.entity_id in lq.gold else 0.0
            examples.append(TrainingExample(fv, label, lq.query_id, ref.entity_id))
    logger.info("training set: %d examples; %s", len(examples), report.summary())
    return examples, report


def _as_xy(data: Sequence[TrainingExample]) -> tuple[np.ndarray, np.ndarray]:
    if not data:
        raise EmptyTrainingSet("no training examples")
    X = np.array([ex.features for ex in data], dtype=np.float64).reshape(len(data), -1)
    y = np.array([ex.label for ex in data], dtype=np.float64)
    return X, y


def _clamp01(raw):
    out = np.clip(raw, 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


# -- SVR --------------------------------------------------------------------


@dataclass(frozen=True)
class SvrParams:
    C: float = 1.0
    epsilon: float = 0.1
    epochs: int = 500
    seed: int = 42
    learning_rate: float = 0.1

    def __post_init__(self):
        if self.C <= 0 or self.epsilon < 0 or self.epochs < 1 or self.learning_rate <= 0:
            raise ValueError(f"invalid SVR hyperparameters {self}")


@dataclass
class SvrModel:
    weights: np.ndarray
    bias: float
    params: SvrParams = field(default_factory=SvrParams)
    objective_history: list[float] = field(default_factory=list, compare=False, repr=False)

    def raw(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias


def svr_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, C: float, epsilon: float) -> float:
    resid = np.abs(y - (X @ w + b))
    return float(C * np.maximum(0.0, resid - epsilon).sum() + 0.5 * (w @ w))


def svr_train(data: Sequence[TrainingExample], params: SvrParams = SvrParams()) -> SvrModel:
    """Fit a linear SVR by seeded stochastic subgradient descent.

    Each epoch visits the examples in a fresh seeded order with step size
    ``learning_rate / sqrt(t)``.  The returned weights are the best iterate
    seen (the running iterate or the running average of iterates) under the
    primal objective, so ``objective_history`` never increases.  Training
    stops once the objective has improved by less than 1e-6 over 10 epochs.
    """
    X, y = _as_xy(data)
    return _svr_fit(X, y, params)


def _svr_fit(X: np.ndarray, y: np.ndarray, params: SvrParams) -> SvrModel:
    n, d = X.shape
    if n < 2 or len(np.unique(y)) < 2:
        logger.warning("SVR training on %d examples with labels %s", n, sorted(set(y.tolist())))
    rng = np.random.default_rng(params.seed)
    C, eps = params.C, params.epsilon
    w = np.zeros(d)
    b = 0.0
    avg_w = np.zeros(d)
    avg_b = 0.0
    best_w, best_b = w.copy(), b
    best = svr_objective(w, b, X, y, C, eps)
    history: list[float] = []
    t = 0
    for _ in range(params.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = params.learning_rate / np.sqrt(t)
            xi = X[i]
            r = y[i] - (xi @ w + b)
            s = 0.0
            if r > eps:
                s = 1.0
            elif r < -eps:
                s = -1.0
            w = w - eta * (w / n - C * s * xi)
            b = b + eta * C * s
            avg_w += (w - avg_w) / t
            avg_b += (b - avg_b) / t
        for cw, cb in ((w, b), (avg_w, avg_b)):
            obj = svr_objective(cw, cb, X, y, C, eps)
            if obj < best:
                best, best_w, best_b = obj, cw.copy(), float(cb)
        history.append(best)
        if len(history) > 10 and history[-11] - history[-1] <= 1e-6 * max(1.0, abs(history[-1])):
            break
    return SvrModel(best_w, float(best_b), params, history)


def svr_predict(model: SvrModel, x):
    """Clamped linear output; a float for one vector, an array for a matrix."""
    return _clamp01(model.raw(x))


# -- MART -------------------------------------------------------------------


@dataclass(frozen=True)
class MartParams:
    n_trees: int = 100
    max_depth: int = 3
    min_leaf: int = 2
    learning_rate: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if self.n_trees < 0 or self.max_depth < 0 or self.min_leaf < 1:
            raise ValueError(f"invalid MART hyperparameters {self}")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")


@dataclass
class RegressionTree:
    """Flat array tree.  ``feature[i] == -1`` marks a leaf; a sample goes left
    when ``x[feature] <= threshold``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def depth(self, node: int = 0) -> int:
        if self.feature[node] < 0:
            return 0
        return 1 + max(self.depth(int(self.left[node])), self.depth(int(self.right[node])))

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            feat = self.feature[node]
            inner = feat >= 0
            if not inner.any():
                break
            f = np.where(inner, feat, 0)
            go_left = X[rows, f] <= self.threshold[node]
            nxt = np.where(go_left, self.left[node], self.right[node])
            node = np.where(inner, nxt, node)
        return self.value[node]


def _best_split(X: np.ndarray, r: np.ndarray, min_leaf: int):
    n = len(r)
    total = r.sum()
    base = total * total / n
    best = None  # (gain, feature, threshold)
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        cs = np.cumsum(r[order])
        for k in range(min_leaf - 1, n - min_leaf):
            if xs[k] == xs[k + 1]:
                continue
            nl = k + 1
            sl = cs[k]
            sr = total - sl
            gain = sl * sl / nl + sr * sr / (n - nl) - base
            if best is None or gain > best[0]:
                best = (gain, j, 0.5 * (xs[k] + xs[k + 1]))
    return best


def fit_tree(X: np.ndarray, r: np.ndarray, max_depth: int, min_leaf: int) -> RegressionTree:
    """Least-squares regression tree on residuals ``r``.

    A node is split on the best threshold even when the gain is zero, so
    interactions that no single split reveals (XOR) can still be learned;
    nodes with constant residuals are never split.
    """
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(idx: np.ndarray, depth: int) -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(float(r[idx].mean()))
        if depth >= max_depth or len(idx) < 2 * min_leaf or np.ptp(r[idx]) == 0.0:
            return node
        split = _best_split(X[idx], r[idx], min_leaf)
        if split is None:
            return node
        _, j, thr = split
        mask = X[idx, j] <= thr
        feature[node] = j
        threshold[node] = thr
        left[node] = grow(idx[mask], depth + 1)
        right[node] = grow(idx[~mask], depth + 1)
        return node

    grow(np.arange(len(r)), 0)
    return RegressionTree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=np.float64),
    )


@dataclass
class MartModel:
    trees: list[RegressionTree]
    learning_rate: float
    base_score: float
    params: MartParams = field(default_factory=MartParams)
    train_mse: list[float] = field(default_factory=list, compare=False, repr=False)

    def raw(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        total = np.zeros(len(X2))
        for tree in self.trees:
            total += tree.predict(X2)
        out = self.base_score + self.learning_rate * total
        return out[0] if single else out


def mart_train(data: Sequence[TrainingExample], params: MartParams = MartParams()) -> MartModel:
    """Least-squares gradient boosting.

    ``train_mse[t]`` is the (unclamped) training MSE after ``t`` stages, with
    ``train_mse[0]`` the MSE of the constant base score.
    """
    X, y = _as_xy(data)
    return _mart_fit(X, y, params)


def _mart_fit(X: np.ndarray, y: np.ndarray, params: MartParams) -> MartModel:
    base = float(y.mean())
    pred = np.full(len(y), base)
    mse = [float(np.mean((y - pred) ** 2))]
    trees = []
    for _ in range(params.n_trees):
        resid = y - pred
        tree = fit_tree(X, resid, params.max_depth, params.min_leaf)
        trees.append(tree)
        pred = pred + params.learning_rate * tree.predict(X)
        mse.append(float(np.mean((y - pred) ** 2)))
    return MartModel(trees, params.learning_rate, base, params, mse)


def mart_predict(model: MartModel, x):
    return _clamp01(model.raw(x))


# -- ensemble ---------------------------------------------------------------


def score(svr: SvrModel, mart: MartModel, x):
    """Mean of the two clamped predictions."""
    return _clamp01((np.asarray(svr_predict(svr, x)) + np.asarray(mart_predict(mart, x))) / 2.0)


@dataclass
class ModelBundle:
    svr: SvrModel
    mart: MartModel

    def score(self, x):
        return score(self.svr, self.mart, x)


def train_bundle(
    data: Sequence[TrainingExample],
    svr_params: SvrParams = SvrParams(),
    mart_params: MartParams = MartParams(),
) -> ModelBundle:
    X, y = _as_xy(data)
    return ModelBundle(_svr_fit(X, y, svr_params), _mart_fit(X, y, mart_params))
