"""End-to-end grounding: pool, cluster, propose, adjust, score, select."""
from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator

from .clustering import temporal_coherence_cluster
from .config import PipelineConfig
from .io import FeatureSequence, QueryEmbedding
from .pooling import temporal_pool
from .proposals import enumerate_proposals, extract_change_points
from .selection import (GroundingResult, score_proposals, select_best,
                        select_best_multi_query)
from .similarity import adjust_similarities, raw_similarities

QueryLike = Union[QueryEmbedding, np.ndarray]


class MomentGrounder(BaseEstimator):
    """Training-free moment localizer for one video / query pair.

    Parameters mirror PipelineConfig; use `from_config` to build from one.
    After `predict`, the intermediate artifacts of the last run are kept
    on `labels_`, `change_points_` and `proposals_` for diagnostics.
    """

    def __init__(self, pooling_window: int = 21, pooling_kernel: str = "uniform",
                 gaussian_sigma: Optional[float] = None, num_clusters: int = 9,
                 coherence_window: int = 7, clustering_max_iters: int = 100,
                 clustering_seed: int = 0, normalization: str = "box_cox",
                 lambda_mode: str = "auto_mle",
                 fixed_lambda: Optional[float] = None):
        self.pooling_window = pooling_window
        self.pooling_kernel = pooling_kernel
        self.gaussian_sigma = gaussian_sigma
        self.num_clusters = num_clusters
        self.coherence_window = coherence_window
        self.clustering_max_iters = clustering_max_iters
        self.clustering_seed = clustering_seed
        self.normalization = normalization
        self.lambda_mode = lambda_mode
        self.fixed_lambda = fixed_lambda

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "MomentGrounder":
        return cls(**config.to_dict())

    def config(self) -> PipelineConfig:
        return PipelineConfig(**{k: v for k, v in self.get_params().items()
                                 if v is not None})

    def _propose(self, features: FeatureSequence):
        cfg = self.config()
        pooled = temporal_pool(features, cfg)
        assignment = temporal_coherence_cluster(pooled, cfg)
        change_points = extract_change_points(assignment.labels)
        proposal_set = enumerate_proposals(change_points)
        self.labels_ = assignment.labels
        self.change_points_ = change_points
        self.proposals_ = proposal_set
        return proposal_set

    def _adjust(self, features: FeatureSequence, query: QueryLike):
        cfg = self.config()
        if not isinstance(query, QueryEmbedding):
            query = QueryEmbedding(vector=np.asarray(query))
        raw = raw_similarities(features, query)
        return adjust_similarities(raw, cfg)

    def predict(self, features: FeatureSequence, query: QueryLike,
                keep_ranked: bool = False) -> GroundingResult:
        proposal_set = self._propose(features)
        adjusted = self._adjust(features, query)
        scored = score_proposals(adjusted, proposal_set)
        return select_best(scored, frame_rate=features.frame_rate,
                           lmbda=adjusted.lmbda, shift=adjusted.shift,
                           keep_ranked=keep_ranked)

    def predict_multi(self, features: FeatureSequence,
                      queries: Sequence[QueryLike],
                      keep_ranked: bool = False) -> GroundingResult:
        """Ground with several pre-embedded query variants of one sentence.

        Proposals depend only on the video, so one proposal set is scored
        against each query's adjusted similarity series and the global
        argmax wins.
        """
        if not queries:
            raise ValueError("at least one query is required")
        proposal_set = self._propose(features)
        per_query = [(proposal_set, self._adjust(features, q)) for q in queries]
        return select_best_multi_query(per_query, frame_rate=features.frame_rate,
                                       keep_ranked=keep_ranked)
