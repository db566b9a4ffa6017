"""Training-free video temporal grounding engine."""

from .config import PipelineConfig, load_config, load_config_file
from .io import (DatasetManifest, FeatureSequence, GroundingRecord,
                 ManifestRecord, QueryEmbedding, load_manifest,
                 read_feature_file, read_query_file, read_report,
                 write_feature_file, write_query_file, write_report)
from .pooling import PooledFeatureSequence, TemporalPooler, temporal_pool
from .clustering import (ClusterAssignment, TemporalCoherenceKMeans,
                         objective_value, temporal_coherence_cluster)
from .proposals import (ChangePointSet, ProposalSet, enumerate_proposals,
                        extract_change_points)
from .similarity import (AdjustedSimilaritySeries, SimilarityAdjuster,
                         SimilaritySeries, box_cox_adjust, raw_similarities,
                         skewness, yeo_johnson_adjust)
from .selection import (GroundingResult, ScoredProposal, score_proposals,
                        select_best, select_best_multi_query)
from .metrics import (EvalSummary, NoiseAugmentation, clusters_per_gt,
                      evaluate, insert_noise_prefix, interval_iou)
from .pipeline import MomentGrounder

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig", "load_config", "load_config_file",
    "FeatureSequence", "QueryEmbedding", "DatasetManifest", "ManifestRecord",
    "GroundingRecord", "read_feature_file", "write_feature_file",
    "read_query_file", "write_query_file", "load_manifest",
    "write_report", "read_report",
    "PooledFeatureSequence", "TemporalPooler", "temporal_pool",
    "ClusterAssignment", "TemporalCoherenceKMeans", "objective_value",
    "temporal_coherence_cluster",
    "ChangePointSet", "ProposalSet", "extract_change_points",
    "enumerate_proposals",
    "SimilaritySeries", "AdjustedSimilaritySeries", "SimilarityAdjuster",
    "raw_similarities", "box_cox_adjust", "yeo_johnson_adjust", "skewness",
    "ScoredProposal", "GroundingResult", "score_proposals", "select_best",
    "select_best_multi_query",
    "EvalSummary", "NoiseAugmentation", "interval_iou", "evaluate",
    "insert_noise_prefix", "clusters_per_gt",
    "MomentGrounder",
]
