"""Temporal coherence clustering.

Lloyd-style alternation on a k-means objective whose assignment cost for
frame i sums squared distances over a temporal window of size r around i
(window indices clamped to the sequence). r=1 is naive k-means.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .config import PipelineConfig
from .pooling import PooledFeatureSequence


@dataclass
class ClusterAssignment:
    labels: np.ndarray          # (N,) int, ids in [0, k')
    centroids: np.ndarray       # (k', D); empty clusters already removed
    objective: float            # final windowed objective value
    iterations: int             # assignment/update rounds executed
    objective_history: list = field(default_factory=list)
    label_history: list = field(default_factory=list)

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


def _validate_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("expected a non-empty N x D matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite features")
    return X


def _window_row_sum(A: np.ndarray, half: int) -> np.ndarray:
    """Sum of rows over a clamped window of size 2*half+1 around each row."""
    if half == 0:
        return A.copy()
    n = A.shape[0]
    acc = np.zeros_like(A, dtype=np.float64)
    for offset in range(-half, half + 1):
        idx = np.clip(np.arange(n) + offset, 0, n - 1)
        acc += A[idx]
    return acc


def _pairwise_sq_dists(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = (np.sum(X ** 2, axis=1)[:, None]
          + np.sum(centers ** 2, axis=1)[None, :]
          - 2.0 * X @ centers.T)
    return np.maximum(d2, 0.0)


def _windowed_cost(X: np.ndarray, centers: np.ndarray, half: int) -> np.ndarray:
    """(N, k) matrix of window-summed squared distances to each centroid."""
    return _window_row_sum(_pairwise_sq_dists(X, centers), half)


def kmeans_plus_plus_init(X: np.ndarray, k: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ (D^2) sampling of k initial centroids."""
    X = _validate_matrix(X)
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = X[first]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # All remaining points coincide with chosen centers.
            idx = int(rng.integers(n))
        centers[j] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


def objective_value(pooled, labels, centroids, r: int) -> float:
    """Windowed clustering objective for a given labeling and centroid set."""
    X = _validate_matrix(getattr(pooled, "data", pooled))
    labels = np.asarray(labels, dtype=np.intp)
    centroids = np.asarray(centroids, dtype=np.float64)
    if labels.shape[0] != X.shape[0]:
        raise ValueError("labels length does not match feature count")
    if labels.size and (labels.min() < 0 or labels.max() >= centroids.shape[0]):
        raise ValueError("label out of range")
    if r < 1 or r % 2 == 0:
        raise ValueError("r must be a positive odd integer")
    cost = _windowed_cost(X, centroids, (r - 1) // 2)
    return float(cost[np.arange(X.shape[0]), labels].sum())


class TemporalCoherenceKMeans(ClusterMixin, BaseEstimator):
    """K-means with a temporally windowed assignment/update rule.

    Deterministic for a fixed random_state; empty clusters are dropped
    (labels stay contiguous in [0, k')). Attributes after fit follow the
    sklearn convention: labels_, cluster_centers_, inertia_, n_iter_.
    """

    def __init__(self, n_clusters: int = 9, coherence_window: int = 7,
                 max_iter: int = 100, random_state: int = 0,
                 record_labels: bool = False):
        self.n_clusters = n_clusters
        self.coherence_window = coherence_window
        self.max_iter = max_iter
        self.random_state = random_state
        self.record_labels = record_labels

    def fit(self, X, y=None):
        X = _validate_matrix(X)
        k = self.n_clusters
        r = self.coherence_window
        if k < 1:
            raise ValueError("n_clusters must be >= 1")
        if r < 1 or r % 2 == 0:
            raise ValueError("coherence_window must be a positive odd integer")
        half = (r - 1) // 2
        n = X.shape[0]
        rng = np.random.default_rng(self.random_state)
        centers = kmeans_plus_plus_init(X, k, rng)
        win_sums = _window_row_sum(X, half)     # used by the update step

        prev: Optional[np.ndarray] = None
        objective_history: list[float] = []
        label_history: list[np.ndarray] = []
        final_obj = None
        n_iter = 0
        for _ in range(self.max_iter):
            cost = _windowed_cost(X, centers, half)
            if prev is not None:
                # Objective after the previous round's centroid update.
                objective_history.append(float(cost[np.arange(n), prev].sum()))
            labels = cost.argmin(axis=1)        # ties resolve to the lower id
            if prev is not None and np.array_equal(labels, prev):
                final_obj = float(cost[np.arange(n), labels].sum())
                break
            n_iter += 1
            counts = np.bincount(labels, minlength=centers.shape[0])
            survivors = counts > 0
            if not survivors.all():
                centers = centers[survivors]
                remap = np.cumsum(survivors) - 1
                labels = remap[labels]
                counts = counts[survivors]
            # Each centroid is the mean of every (clamped) window copy
            # attributed to its member frames.
            for j in range(centers.shape[0]):
                centers[j] = win_sums[labels == j].sum(axis=0) / (r * counts[j])
            if self.record_labels:
                label_history.append(labels.copy())
            prev = labels
        if final_obj is None:
            # Iteration cap hit: evaluate the objective at the final state.
            cost = _windowed_cost(X, centers, half)
            final_obj = float(cost[np.arange(n), prev].sum())
            objective_history.append(final_obj)
            labels = prev

        self.labels_ = labels.astype(np.intp)
        self.cluster_centers_ = centers
        self.inertia_ = final_obj
        self.n_iter_ = n_iter
        self.objective_history_ = objective_history
        self.labels_history_ = label_history
        return self


def temporal_coherence_cluster(pooled: PooledFeatureSequence,
                               config: PipelineConfig,
                               record_labels: bool = False) -> ClusterAssignment:
    est = TemporalCoherenceKMeans(
        n_clusters=config.num_clusters,
        coherence_window=config.coherence_window,
        max_iter=config.clustering_max_iters,
        random_state=config.clustering_seed,
        record_labels=record_labels,
    ).fit(pooled.data)
    return ClusterAssignment(
        labels=est.labels_,
        centroids=est.cluster_centers_,
        objective=est.inertia_,
        iterations=est.n_iter_,
        objective_history=est.objective_history_,
        label_history=est.labels_history_,
    )
