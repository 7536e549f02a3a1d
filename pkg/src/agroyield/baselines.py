"""Comparison models built from first principles.

- Logistic regression: sigmoid-link regression on the min-max scaled
  target, trained by full-batch gradient descent on cross-entropy.
- Linear SVM: epsilon-insensitive support vector regression trained by
  subgradient descent on 1/2 ||w||^2 / n + C * mean(hinge residuals).
- Random forest: bagged CART regression trees, variance-reduction splits
  over a seeded random feature subset per node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySample, EmptyTrainingSet
from .rng import derive_seed


def _check_nonempty(x):
    if len(x) == 0:
        raise EmptyTrainingSet("no training examples")


def _sigmoid(z):
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))),
                    np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))


# ---------------------------------------------------------------- logistic

@dataclass
class LogisticModel:
    weights: np.ndarray  # (n_features,)
    bias: float

    def predict_raw(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return _sigmoid(x @ self.weights + self.bias)


def logistic_loss(model: LogisticModel, x, y) -> float:
    p = np.clip(model.predict_raw(x), 1e-12, 1.0 - 1e-12)
    y = np.asarray(y, dtype=float)
    return float(np.mean(-y * np.log(p) - (1.0 - y) * np.log(1.0 - p)))


def train_logistic(x, y, learning_rate=0.5, epochs=500, seed=0,
                   loss_callback=None) -> LogisticModel:
    """Full-batch gradient descent on cross-entropy vs soft targets in [0,1]."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    _check_nonempty(x)
    w = np.zeros(x.shape[1])
    b = 0.0
    n = x.shape[0]
    for _ in range(epochs):
        residual = _sigmoid(x @ w + b) - y
        w = w - learning_rate * (x.T @ residual) / n
        b = b - learning_rate * float(residual.mean())
        if loss_callback is not None:
            loss_callback(logistic_loss(LogisticModel(w, b), x, y))
    return LogisticModel(weights=w, bias=b)


# --------------------------------------------------------------------- svm

@dataclass
class SvmModel:
    weights: np.ndarray
    bias: float
    epsilon: float = 0.05
    c: float = 1.0

    def predict_raw(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return x @ self.weights + self.bias


def svm_objective(model: SvmModel, x, y) -> float:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    residual = np.abs(model.predict_raw(x) - np.asarray(y, dtype=float))
    hinge = np.maximum(0.0, residual - model.epsilon)
    n = x.shape[0]
    return float(0.5 * np.dot(model.weights, model.weights) / n
                 + model.c * hinge.mean())


def train_svm(x, y, epsilon=0.05, c=1.0, learning_rate=0.1, epochs=500,
              seed=0, loss_callback=None) -> SvmModel:
    """Subgradient descent on the epsilon-insensitive linear SVR objective.

    The step size decays as learning_rate / sqrt(t + 1) so the iterates
    settle instead of oscillating inside the hinge's kink region.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    _check_nonempty(x)
    n = x.shape[0]
    w = np.zeros(x.shape[1])
    b = 0.0
    for t in range(epochs):
        step = learning_rate / np.sqrt(t + 1.0)
        residual = x @ w + b - y
        active = np.abs(residual) > epsilon  # inside the tube: zero subgradient
        sign = np.sign(residual) * active
        grad_w = w / n + c * (x.T @ sign) / n
        grad_b = c * float(sign.mean())
        w = w - step * grad_w
        b = b - step * grad_b
        if loss_callback is not None:
            loss_callback(svm_objective(SvmModel(w, b, epsilon, c), x, y))
    return SvmModel(weights=w, bias=b, epsilon=epsilon, c=c)


# ------------------------------------------------------------------ forest

@dataclass
class TreeNode:
    # internal node: feature/threshold/left/right set, value is None
    # leaf: value/n_samples set, feature is None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float | None = None
    n_samples: int = 0

    @property
    def is_leaf(self):
        return self.feature is None


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 12
    min_leaf: int = 5
    features_per_split: int = 16  # ceil(46 / 3)
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1")


@dataclass
class ForestModel:
    trees: list
    config: ForestConfig


def _best_split(x, y, feature_indices, min_leaf):
    """Best (feature, threshold) by variance reduction.

    Candidates are midpoints between consecutive sorted unique values.
    Ties break toward the lowest feature index, then lowest threshold;
    iterating features in ascending order with strict improvement gives
    exactly that.
    """
    n = len(y)
    total_sum = y.sum()
    total_sq = (y * y).sum()
    parent_sse = total_sq - total_sum * total_sum / n
    best = None  # (sse, feature, threshold)
    for f in feature_indices:
        xf = x[:, f]
        order = np.argsort(xf, kind="stable")
        xs, ys = xf[order], y[order]
        # split after position i puts i+1 samples left
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        boundary = xs[:-1] < xs[1:]
        counts = np.arange(1, n)
        valid = boundary & (counts >= min_leaf) & (n - counts >= min_leaf)
        if not valid.any():
            continue
        left_sse = csq[:-1] - csum[:-1] ** 2 / counts
        right_sum = total_sum - csum[:-1]
        right_sq = total_sq - csq[:-1]
        right_sse = right_sq - right_sum ** 2 / (n - counts)
        sse = np.where(valid, left_sse + right_sse, np.inf)
        k = int(np.argmin(sse))
        if sse[k] < parent_sse - 1e-12:
            threshold = 0.5 * (xs[k] + xs[k + 1])
            cand = (float(sse[k]), f, float(threshold))
            if best is None or cand[0] < best[0] - 1e-12:
                best = cand
    return best


def build_tree(x, y, max_depth=12, min_leaf=5, features_per_split=None,
               seed=0) -> TreeNode:
    """Grow a CART regression tree; leaves predict the mean target."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    if len(y) == 0:
        raise EmptySample("cannot build a tree from an empty sample")
    n_features = x.shape[1]
    if features_per_split is None:
        features_per_split = n_features
    features_per_split = min(features_per_split, n_features)
    rng = np.random.default_rng(seed)

    def grow(idx, depth):
        yn = y[idx]
        node = TreeNode(value=float(yn.mean()), n_samples=len(idx))
        if depth >= max_depth or len(idx) < 2 * min_leaf or np.all(yn == yn[0]):
            return node
        chosen = rng.choice(n_features, size=features_per_split, replace=False)
        chosen.sort()
        found = _best_split(x[idx], yn, chosen, min_leaf)
        if found is None:
            return node
        _, feature, threshold = found
        mask = x[idx, feature] <= threshold
        node.feature = int(feature)
        node.threshold = threshold
        node.left = grow(idx[mask], depth + 1)
        node.right = grow(idx[~mask], depth + 1)
        return node

    return grow(np.arange(len(y)), 0)


def predict_tree(node: TreeNode, x) -> float:
    x = np.asarray(x, dtype=float)
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


def train_forest(x, y, config: ForestConfig = ForestConfig()) -> ForestModel:
    """Bag trees on seeded bootstrap resamples; prediction is the tree mean."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    _check_nonempty(x)
    n = len(y)
    trees = []
    for i in range(config.n_trees):
        tree_seed = derive_seed(config.seed, f"tree-{i}")
        if config.bootstrap:
            rng = np.random.default_rng(derive_seed(tree_seed, "bootstrap"))
            idx = rng.integers(0, n, n)
            xs, ys = x[idx], y[idx]
        else:
            xs, ys = x, y
        trees.append(build_tree(
            xs, ys,
            max_depth=config.max_depth,
            min_leaf=config.min_leaf,
            features_per_split=config.features_per_split,
            seed=tree_seed,
        ))
    return ForestModel(trees=trees, config=config)


def predict_forest(model: ForestModel, x) -> float:
    return float(np.mean([predict_tree(t, x) for t in model.trees]))


def predict_forest_batch(model: ForestModel, x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return np.array([predict_forest(model, row) for row in x])
