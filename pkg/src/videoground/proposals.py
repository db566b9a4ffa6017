"""Change points of a label sequence and the candidate segments they induce.

Indices are 0-based and intervals half-open: a boundary between frames
i-1 and i is recorded as index i, and a proposal (s, e) covers frames
s..e-1. With M interior change points there are (M+1)(M+2)/2 proposals.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class ChangePointSet:
    """Strictly increasing frame indices, always starting at 0 and ending at N."""

    points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = self.points
        if len(pts) < 2 or pts[0] != 0:
            raise ValueError("change points must start at 0 and end at N >= 1")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("change points must be strictly increasing")

    @property
    def n_frames(self) -> int:
        return self.points[-1]

    @property
    def num_interior(self) -> int:
        """M, the number of label transitions."""
        return len(self.points) - 2


@dataclass(frozen=True)
class ProposalSet:
    """All (start, end) candidate segments drawn from a change-point set."""

    pairs: tuple[tuple[int, int], ...]
    n_frames: int

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def extract_change_points(labels) -> ChangePointSet:
    """Boundaries where consecutive frame labels differ, plus both endpoints."""
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size < 1:
        raise ValueError("labels must be a non-empty 1-D sequence")
    interior = np.flatnonzero(labels[1:] != labels[:-1]) + 1
    points = (0, *(int(i) for i in interior), int(labels.size))
    return ChangePointSet(points=points)


def enumerate_proposals(change_points: ChangePointSet) -> ProposalSet:
    """Every ordered pair of change points; count is (M+1)(M+2)/2."""
    pairs = tuple(combinations(change_points.points, 2))
    return ProposalSet(pairs=pairs, n_frames=change_points.n_frames)
