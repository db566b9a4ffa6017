"""Evaluation harness: interval IoU, R@m / mIoU, noise-prefix augmentation,
and the fragmentation diagnostic (label runs per ground-truth interval)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .io import FeatureSequence


@dataclass
class EvalSummary:
    recalls: dict            # threshold m -> R@m
    miou: float
    n_records: int
    ious: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "recalls": {f"R@{m:g}": r for m, r in self.recalls.items()},
            "mIoU": self.miou,
            "n_records": self.n_records,
        }


@dataclass(frozen=True)
class NoiseAugmentation:
    """Prefix of synthetic frames prepended to a video."""

    rho: float      # prefix length in seconds
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rho < 0:
            raise ValueError("noise prefix length must be >= 0")


def interval_iou(pred: tuple[float, float], gt: tuple[float, float]) -> float:
    """Intersection-over-union of two half-open intervals; 0 when disjoint."""
    ps, pe = pred
    gs, ge = gt
    if not (pe > ps and ge > gs):
        raise ValueError("degenerate interval")
    inter = min(pe, ge) - max(ps, gs)
    if inter <= 0:
        return 0.0
    union = max(pe, ge) - min(ps, gs)
    return inter / union


def evaluate(records: Sequence[tuple], thresholds: Sequence[float]) -> EvalSummary:
    """R@m (strictly IoU > m) and mIoU over (prediction, ground-truth) pairs."""
    if not records:
        raise ValueError("no records to evaluate")
    for m in thresholds:
        if not 0 < m < 1:
            raise ValueError(f"threshold {m} outside (0, 1)")
    ious = [interval_iou(pred, gt) for pred, gt in records]
    n = len(ious)
    recalls = {float(m): sum(1 for v in ious if v > m) / n for m in thresholds}
    return EvalSummary(recalls=recalls, miou=float(np.mean(ious)),
                       n_records=n, ious=ious)


def insert_noise_prefix(seq: FeatureSequence, gt: tuple[float, float],
                        aug: NoiseAugmentation) -> tuple[FeatureSequence,
                                                         tuple[float, float]]:
    """Prepend rho seconds of seeded unit-norm gaussian rows; shift the GT.

    rho * frame_rate must round to a whole number of frames.
    """
    n_noise_f = aug.rho * seq.frame_rate
    n_noise = int(round(n_noise_f))
    if abs(n_noise_f - n_noise) > 1e-6:
        raise ValueError(f"rho={aug.rho} does not correspond to a whole "
                         f"frame count at {seq.frame_rate} fps")
    if n_noise == 0:
        return seq, gt
    rng = np.random.default_rng(aug.seed)
    noise = rng.standard_normal((n_noise, seq.dim))
    noise /= np.linalg.norm(noise, axis=1, keepdims=True)
    data = np.concatenate([noise.astype(np.float32), seq.data])
    shifted = (gt[0] + aug.rho, gt[1] + aug.rho)
    return FeatureSequence(data=data, frame_rate=seq.frame_rate), shifted


def clusters_per_gt(labels, gt_frames: tuple[int, int]) -> int:
    """Count maximal constant-label runs overlapping a ground-truth interval."""
    labels = np.asarray(labels)
    n = labels.size
    start, end = gt_frames
    if not (0 <= start < end <= n):
        raise ValueError(f"ground-truth frames [{start}, {end}) outside [0, {n})")
    window = labels[start:end]
    # Runs that merely extend beyond the GT still count once each.
    return int(1 + np.count_nonzero(window[1:] != window[:-1]))
