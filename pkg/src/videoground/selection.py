"""Proposal scoring and final interval selection.

A proposal's score is the mean adjusted similarity inside the interval
minus the mean outside it; scores for the whole O(N^2) proposal set are
computed from one prefix-sum pass. The full-span proposal has an empty
complement, whose mean is taken as 0 by convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .proposals import ProposalSet


@dataclass(frozen=True)
class ScoredProposal:
    start: int
    end: int
    score: float
    inside_mean: float
    outside_mean: float

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass
class GroundingResult:
    start_frame: int
    end_frame: int
    start_sec: float
    end_sec: float
    score: float
    lmbda: Optional[float] = None   # adjustment metadata, if any
    shift: float = 0.0
    ranked: Optional[list] = None   # full ranked proposal list (debug)

    @property
    def interval_sec(self) -> tuple[float, float]:
        return (self.start_sec, self.end_sec)


def _series_values(a) -> np.ndarray:
    return np.asarray(getattr(a, "values", a), dtype=np.float64).reshape(-1)


def score_proposals(a, proposals: ProposalSet) -> list[ScoredProposal]:
    """Score every proposal against an adjusted similarity series."""
    values = _series_values(a)
    n = values.size
    prefix = np.concatenate(([0.0], np.cumsum(values, dtype=np.float64)))
    total = prefix[-1]
    scored = []
    for start, end in proposals:
        if not (0 <= start < end <= n):
            raise ValueError(f"proposal ({start}, {end}) out of range for N={n}")
        inside_sum = prefix[end] - prefix[start]
        length = end - start
        inside_mean = inside_sum / length
        out_len = n - length
        outside_mean = (total - inside_sum) / out_len if out_len else 0.0
        scored.append(ScoredProposal(start=int(start), end=int(end),
                                     score=inside_mean - outside_mean,
                                     inside_mean=inside_mean,
                                     outside_mean=outside_mean))
    return scored


def _rank_key(p: ScoredProposal):
    # Highest score wins; ties go to the longer proposal, then earlier start.
    return (p.score, p.duration, -p.start)


def select_best(scored: Sequence[ScoredProposal], frame_rate: float = 1.0,
                lmbda: Optional[float] = None, shift: float = 0.0,
                keep_ranked: bool = False) -> GroundingResult:
    """Argmax over scored proposals with a deterministic tie-break."""
    if not scored:
        raise ValueError("no proposals to select from")
    best = max(scored, key=_rank_key)
    ranked = sorted(scored, key=_rank_key, reverse=True) if keep_ranked else None
    return GroundingResult(
        start_frame=best.start, end_frame=best.end,
        start_sec=best.start / frame_rate, end_sec=best.end / frame_rate,
        score=best.score, lmbda=lmbda, shift=shift, ranked=ranked)


def select_best_multi_query(per_query: Sequence[tuple], frame_rate: float = 1.0,
                            keep_ranked: bool = False) -> GroundingResult:
    """Global argmax over every (proposal set, adjusted series) pair.

    Each query contributes its own proposal set scored with its own
    adjusted similarity series; all series must share the frame count.
    """
    if not per_query:
        raise ValueError("at least one query is required")
    lengths = {len(_series_values(a)) for _, a in per_query}
    if len(lengths) != 1:
        raise ValueError(f"inconsistent series lengths across queries: {lengths}")
    all_scored: list[ScoredProposal] = []
    best_meta = None
    best = None
    for proposal_set, adjusted in per_query:
        scored = score_proposals(adjusted, proposal_set)
        all_scored.extend(scored)
        top = max(scored, key=_rank_key)
        if best is None or _rank_key(top) > _rank_key(best):
            best = top
            best_meta = (getattr(adjusted, "lmbda", None),
                         getattr(adjusted, "shift", 0.0))
    ranked = sorted(all_scored, key=_rank_key, reverse=True) if keep_ranked else None
    return GroundingResult(
        start_frame=best.start, end_frame=best.end,
        start_sec=best.start / frame_rate, end_sec=best.end / frame_rate,
        score=best.score, lmbda=best_meta[0], shift=best_meta[1], ranked=ranked)
