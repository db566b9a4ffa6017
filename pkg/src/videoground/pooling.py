"""Sliding-window temporal pooling of per-frame features.

Each output row c_i is a convex combination of the input rows inside a
length-w window centered on frame i; window indices that fall outside the
sequence are clamped (replicate padding), so the output keeps length N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .config import PipelineConfig
from .io import FeatureSequence


@dataclass
class PooledFeatureSequence:
    """Temporally aggregated features; same shape and frame rate as the input."""

    data: np.ndarray        # (N, D) float32
    frame_rate: float

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def _clamped_shift(data: np.ndarray, offset: int) -> np.ndarray:
    """Rows shifted by `offset` with edge rows replicated."""
    n = data.shape[0]
    idx = np.clip(np.arange(n) + offset, 0, n - 1)
    return data[idx]


def kernel_weights(window: int, kernel: str, sigma: Optional[float]) -> np.ndarray:
    """Nonnegative window weights summing to 1, indexed by offset -h..h."""
    if kernel == "uniform":
        return np.full(window, 1.0 / window)
    if kernel == "gaussian":
        if sigma is None or sigma <= 0:
            raise ValueError("gaussian kernel requires sigma > 0")
        half = (window - 1) // 2
        offsets = np.arange(-half, half + 1, dtype=np.float64)
        w = np.exp(-(offsets ** 2) / (2.0 * sigma ** 2))
        return w / w.sum()
    raise ValueError(f"unknown pooling kernel {kernel!r}")


def pool_matrix(data: np.ndarray, window: int, kernel: str = "uniform",
                sigma: Optional[float] = None) -> np.ndarray:
    """Pool an (N, D) matrix; float64 accumulation, float32 result.

    Accumulates window offsets in ascending order so the result is
    bit-identical to a direct per-frame summation loop.
    """
    data = np.asarray(data)
    if data.ndim != 2:
        raise ValueError("expected an N x D matrix")
    if not np.all(np.isfinite(data)):
        raise ValueError("non-finite input")
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be a positive odd integer")
    half = (window - 1) // 2
    src = data.astype(np.float64)
    if kernel == "uniform":
        acc = np.zeros_like(src)
        for offset in range(-half, half + 1):
            acc += _clamped_shift(src, offset)
        acc /= window
    else:
        weights = kernel_weights(window, kernel, sigma)
        acc = np.zeros_like(src)
        for offset, weight in zip(range(-half, half + 1), weights):
            acc += weight * _clamped_shift(src, offset)
    return acc.astype(np.float32)


def temporal_pool(features: FeatureSequence,
                  config: PipelineConfig) -> PooledFeatureSequence:
    """Apply the configured pooling kernel to a feature sequence."""
    pooled = pool_matrix(features.data, config.pooling_window,
                         config.pooling_kernel, config.gaussian_sigma)
    return PooledFeatureSequence(data=pooled, frame_rate=features.frame_rate)


class TemporalPooler(TransformerMixin, BaseEstimator):
    """Stateless sklearn-style transformer wrapping `pool_matrix`."""

    def __init__(self, window: int = 21, kernel: str = "uniform",
                 sigma: Optional[float] = None):
        self.window = window
        self.kernel = kernel
        self.sigma = sigma

    def fit(self, X, y=None):
        kernel_weights(self.window, self.kernel, self.sigma)  # validates params
        return self

    def transform(self, X) -> np.ndarray:
        return pool_matrix(X, self.window, self.kernel, self.sigma)
