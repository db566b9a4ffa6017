"""Query-frame similarities and distribution-correcting power transforms.

Raw similarities are dot products between the query embedding and the
*single-frame* features (not the pooled ones). Before proposal scoring
the series can be passed through a Box-Cox or Yeo-Johnson transform with
the exponent fitted by profile maximum likelihood, which reduces the skew
of the similarity distribution while preserving the ordering of values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize, stats
from sklearn.base import BaseEstimator, TransformerMixin

from .config import PipelineConfig
from .io import FeatureSequence, QueryEmbedding

_POSITIVITY_EPS = 1e-6
_LAMBDA_BOUNDS = (-5.0, 5.0)
_LAMBDA_XATOL = 1e-5


@dataclass
class SimilaritySeries:
    values: np.ndarray      # (N,) float64 raw dot products

    def __len__(self) -> int:
        return self.values.size


@dataclass
class AdjustedSimilaritySeries:
    values: np.ndarray      # (N,) float64
    lmbda: float            # fitted or fixed exponent (1.0 for identity)
    shift: float            # nonnegative offset applied before the transform
    method: str = "box_cox"
    degenerate: bool = False    # all-equal input; identity fallback used

    def __len__(self) -> int:
        return self.values.size


def raw_similarities(features: FeatureSequence,
                     query: QueryEmbedding) -> SimilaritySeries:
    """Per-frame dot products f_i . q with 64-bit accumulation."""
    if features.dim != query.dim:
        raise ValueError(f"dimension mismatch: features are {features.dim}-d, "
                         f"query is {query.dim}-d")
    values = features.data.astype(np.float64) @ query.vector.astype(np.float64)
    return SimilaritySeries(values=values)


def box_cox_transform(x: np.ndarray, lmbda: float) -> np.ndarray:
    """(x^lambda - 1)/lambda for positive x; ln x at lambda = 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise ValueError("Box-Cox input must be strictly positive")
    if lmbda == 0.0:
        return np.log(x)
    return (np.power(x, lmbda) - 1.0) / lmbda


def yeo_johnson_transform(x: np.ndarray, lmbda: float) -> np.ndarray:
    """Standard four-branch Yeo-Johnson transform; handles any sign."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    if lmbda == 0.0:
        out[pos] = np.log1p(x[pos])
    else:
        out[pos] = (np.power(x[pos] + 1.0, lmbda) - 1.0) / lmbda
    if lmbda == 2.0:
        out[~pos] = -np.log1p(-x[~pos])
    else:
        out[~pos] = -(np.power(1.0 - x[~pos], 2.0 - lmbda) - 1.0) / (2.0 - lmbda)
    return out


def box_cox_log_likelihood(x: np.ndarray, lmbda: float) -> float:
    """Profile log-likelihood of the Box-Cox exponent on positive data."""
    y = box_cox_transform(x, lmbda)
    var = y.var()
    if var <= 0 or not np.isfinite(var):
        return -np.inf
    n = x.size
    return float(-(n / 2.0) * np.log(var) + (lmbda - 1.0) * np.log(x).sum())


def yeo_johnson_log_likelihood(x: np.ndarray, lmbda: float) -> float:
    y = yeo_johnson_transform(x, lmbda)
    var = y.var()
    if var <= 0 or not np.isfinite(var):
        return -np.inf
    n = x.size
    jac = np.sign(x) * np.log1p(np.abs(x))
    return float(-(n / 2.0) * np.log(var) + (lmbda - 1.0) * jac.sum())


def _fit_lambda(x: np.ndarray, log_likelihood) -> float:
    res = optimize.minimize_scalar(
        lambda l: -log_likelihood(x, l),
        bounds=_LAMBDA_BOUNDS, method="bounded",
        options={"xatol": _LAMBDA_XATOL})
    return float(res.x)


def _series_values(s) -> np.ndarray:
    values = np.asarray(getattr(s, "values", s), dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValueError("similarity series must be a non-empty 1-D vector")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite similarity values")
    return values


def _resolve_lambda(config: PipelineConfig) -> Optional[float]:
    """None means fit by maximum likelihood."""
    if config.lambda_mode == "fixed":
        return float(config.fixed_lambda)
    return None


def box_cox_adjust(s, config: PipelineConfig) -> AdjustedSimilaritySeries:
    """Shift the series to strict positivity, then apply Box-Cox.

    In auto mode the exponent maximizes the profile log-likelihood over
    [-5, 5]; an all-equal series has no defined optimum and falls back to
    the identity with `degenerate` set.
    """
    values = _series_values(s)
    lmbda = _resolve_lambda(config)
    vmin = values.min()
    shift = float(_POSITIVITY_EPS - vmin) if vmin <= 0 else 0.0
    x = values + shift
    if lmbda is None:
        if np.ptp(values) == 0:
            return AdjustedSimilaritySeries(values=values.copy(), lmbda=1.0,
                                            shift=0.0, method="box_cox",
                                            degenerate=True)
        lmbda = _fit_lambda(x, box_cox_log_likelihood)
    return AdjustedSimilaritySeries(values=box_cox_transform(x, lmbda),
                                    lmbda=lmbda, shift=shift, method="box_cox")


def yeo_johnson_adjust(s, config: PipelineConfig) -> AdjustedSimilaritySeries:
    """Yeo-Johnson variant; no positivity shift is needed."""
    values = _series_values(s)
    lmbda = _resolve_lambda(config)
    if lmbda is None:
        if np.ptp(values) == 0:
            return AdjustedSimilaritySeries(values=values.copy(), lmbda=1.0,
                                            shift=0.0, method="yeo_johnson",
                                            degenerate=True)
        lmbda = _fit_lambda(values, yeo_johnson_log_likelihood)
    return AdjustedSimilaritySeries(values=yeo_johnson_transform(values, lmbda),
                                    lmbda=lmbda, shift=0.0, method="yeo_johnson")


def identity_adjust(s) -> AdjustedSimilaritySeries:
    values = _series_values(s)
    return AdjustedSimilaritySeries(values=values.copy(), lmbda=1.0,
                                    shift=0.0, method="none")


def adjust_similarities(s, config: PipelineConfig) -> AdjustedSimilaritySeries:
    """Dispatch on the configured normalization method."""
    if config.normalization == "none":
        return identity_adjust(s)
    if config.normalization == "box_cox":
        return box_cox_adjust(s, config)
    if config.normalization == "yeo_johnson":
        return yeo_johnson_adjust(s, config)
    raise ValueError(f"unknown normalization {config.normalization!r}")


def skewness(series) -> float:
    """Adjusted Fisher-Pearson sample skewness."""
    values = _series_values(series)
    if values.size < 3:
        raise ValueError("skewness requires at least 3 samples")
    if np.ptp(values) == 0:
        raise ValueError("skewness undefined for a zero-variance series")
    return float(stats.skew(values, bias=False))


class SimilarityAdjuster(TransformerMixin, BaseEstimator):
    """sklearn-style wrapper: fit the exponent on a series, expose lambda_."""

    def __init__(self, method: str = "box_cox", lmbda: Optional[float] = None):
        self.method = method
        self.lmbda = lmbda

    def _config(self) -> PipelineConfig:
        from .config import PipelineConfig
        if self.lmbda is None:
            return PipelineConfig(normalization=self.method)
        return PipelineConfig(normalization=self.method,
                              lambda_mode="fixed", fixed_lambda=self.lmbda)

    def fit_transform(self, X, y=None, **fit_params) -> np.ndarray:
        adjusted = adjust_similarities(np.asarray(X, dtype=np.float64).reshape(-1),
                                       self._config())
        self.lambda_ = adjusted.lmbda
        self.shift_ = adjusted.shift
        self.degenerate_ = adjusted.degenerate
        return adjusted.values

    def fit(self, X, y=None):
        self.fit_transform(X)
        return self
