"""TAGF binary feature files, dataset manifests, and result reports.

TAGF layout (all multi-byte fields little-endian):

    offset  size  field
    0       4     magic "TAGF"
    4       2     format version, u16 (currently 1)
    6       4     N, number of frames, u32
    10      4     D, embedding dimension, u32
    14      4     frame rate in fps, f32
    18      4*N*D payload, f32 row-major (frame i = row i)

Frame i covers [i / fps, (i + 1) / fps) seconds; a proposal (t_i, t_j)
in frame indices maps to [t_i / fps, t_j / fps) seconds, so adjacent
proposals tile the video exactly.
"""
from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

TAGF_MAGIC = b"TAGF"
TAGF_VERSION = 1
_HEADER = struct.Struct("<4sHIIf")


class FormatError(ValueError):
    """Raised for malformed TAGF files."""


class ManifestError(ValueError):
    """Raised for malformed manifest or report lines."""


@dataclass
class FeatureSequence:
    """Per-frame embedding matrix plus the frame-index -> seconds mapping."""

    data: np.ndarray        # (N, D) float32
    frame_rate: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("feature matrix must be N x D with N >= 1 and D >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature matrix contains non-finite values")
        if not (np.isfinite(self.frame_rate) and self.frame_rate > 0):
            raise ValueError("invalid frame rate (must be a positive finite number)")
        self.data = arr
        self.frame_rate = float(self.frame_rate)

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> float:
        return self.n_frames / self.frame_rate


@dataclass
class QueryEmbedding:
    """Text-query embedding in the same space as the frame features."""

    vector: np.ndarray      # (D,) float32

    def __post_init__(self) -> None:
        vec = np.asarray(self.vector, dtype=np.float32).reshape(-1)
        if vec.size < 1:
            raise ValueError("query embedding must be non-empty")
        if not np.all(np.isfinite(vec)):
            raise ValueError("query embedding contains non-finite values")
        self.vector = vec

    @property
    def dim(self) -> int:
        return self.vector.size


def write_feature_file(seq: FeatureSequence, path: str) -> None:
    header = _HEADER.pack(TAGF_MAGIC, TAGF_VERSION, seq.n_frames, seq.dim,
                          np.float32(seq.frame_rate))
    payload = np.ascontiguousarray(seq.data, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_feature_header(path: str) -> tuple[int, int, float]:
    """Decode only (N, D, frame_rate) without loading the payload."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    return _decode_header(raw, path)


def _decode_header(raw: bytes, path: str) -> tuple[int, int, float]:
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, n, d, fps = _HEADER.unpack(raw)
    if magic != TAGF_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != TAGF_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    if n == 0 or d == 0:
        raise FormatError(f"{path}: header declares empty matrix (N={n}, D={d})")
    if not (np.isfinite(fps) and fps > 0):
        raise FormatError(f"{path}: invalid frame rate {fps}")
    return n, d, float(fps)


def read_feature_file(path: str) -> FeatureSequence:
    with open(path, "rb") as fh:
        raw = fh.read()
    n, d, fps = _decode_header(raw[:_HEADER.size], path)
    payload = raw[_HEADER.size:]
    expected = 4 * n * d
    if len(payload) < expected:
        raise FormatError(f"{path}: truncated payload "
                          f"({len(payload)} bytes, expected {expected})")
    if len(payload) > expected:
        raise FormatError(f"{path}: {len(payload) - expected} trailing bytes")
    data = np.frombuffer(payload, dtype="<f4").reshape(n, d)
    if not np.all(np.isfinite(data)):
        raise FormatError(f"{path}: payload contains non-finite values")
    return FeatureSequence(data=data.copy(), frame_rate=fps)


def write_query_file(query: QueryEmbedding, path: str) -> None:
    """A query vector is stored as a 1 x D TAGF file (frame rate 1.0)."""
    seq = FeatureSequence(data=query.vector.reshape(1, -1), frame_rate=1.0)
    write_feature_file(seq, path)


def read_query_file(path: str) -> QueryEmbedding:
    seq = read_feature_file(path)
    if seq.n_frames != 1:
        raise FormatError(f"{path}: query file must contain exactly one row, "
                          f"got {seq.n_frames}")
    return QueryEmbedding(vector=seq.data[0])


# ---------------------------------------------------------------------------
# Manifests and reports: one JSON record per line.
# ---------------------------------------------------------------------------

@dataclass
class ManifestRecord:
    video_id: str
    feature_path: str
    query_id: str
    query_embedding_path: str
    gt_start: float         # seconds
    gt_end: float           # seconds


@dataclass
class DatasetManifest:
    records: list[ManifestRecord] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


_MANIFEST_FIELDS = ("video_id", "feature_path", "query_id",
                    "query_embedding_path", "gt_start", "gt_end")


def load_manifest(path: str, check_features: bool = True) -> DatasetManifest:
    """Load a JSON-lines manifest, resolving paths relative to the file.

    With check_features, each referenced feature file's header is read to
    verify it exists and that the ground-truth interval fits the video.
    """
    base = os.path.dirname(os.path.abspath(path))
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            missing = [k for k in _MANIFEST_FIELDS if k not in doc]
            if missing:
                raise ManifestError(f"{path}:{lineno}: missing fields {missing}")
            rec = ManifestRecord(
                video_id=str(doc["video_id"]),
                feature_path=_resolve(base, str(doc["feature_path"])),
                query_id=str(doc["query_id"]),
                query_embedding_path=_resolve(base, str(doc["query_embedding_path"])),
                gt_start=float(doc["gt_start"]),
                gt_end=float(doc["gt_end"]),
            )
            if not rec.gt_start >= 0:
                raise ManifestError(f"{path}:{lineno}: gt_start must be >= 0")
            if not rec.gt_end > rec.gt_start:
                raise ManifestError(f"{path}:{lineno}: gt_end must be > gt_start")
            if check_features:
                if not os.path.exists(rec.feature_path):
                    raise ManifestError(
                        f"{path}:{lineno}: feature file not found: {rec.feature_path}")
                n, _, fps = read_feature_header(rec.feature_path)
                if rec.gt_end > n / fps + 1e-9:
                    raise ManifestError(
                        f"{path}:{lineno}: gt_end {rec.gt_end} exceeds video "
                        f"duration {n / fps}")
            records.append(rec)
    return DatasetManifest(records=records)


def _resolve(base: str, p: str) -> str:
    return p if os.path.isabs(p) else os.path.join(base, p)


@dataclass
class GroundingRecord:
    """One evaluated video/query pair."""

    video_id: str
    query_id: str
    pred_start: float
    pred_end: float
    gt_start: float
    gt_end: float
    iou: float
    extra: dict = field(default_factory=dict)


def write_report(records: Iterable[GroundingRecord], path: str,
                 summary: Optional[dict] = None) -> None:
    """Write per-record lines followed by one aggregate summary line."""
    records = list(records)
    if summary is None:
        from .metrics import evaluate
        pairs = [((r.pred_start, r.pred_end), (r.gt_start, r.gt_end)) for r in records]
        summary = evaluate(pairs, [0.3, 0.5, 0.7]).to_dict() if pairs else {}
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            doc = {
                "video_id": rec.video_id,
                "query_id": rec.query_id,
                "pred_start": rec.pred_start,
                "pred_end": rec.pred_end,
                "gt_start": rec.gt_start,
                "gt_end": rec.gt_end,
                "iou": rec.iou,
            }
            if rec.extra:
                doc["extra"] = rec.extra
            fh.write(json.dumps(doc) + "\n")
        fh.write(json.dumps({"summary": summary}) + "\n")


def read_report(path: str) -> tuple[list[GroundingRecord], dict]:
    records: list[GroundingRecord] = []
    summary: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            if "summary" in doc:
                summary = doc["summary"]
                continue
            records.append(GroundingRecord(
                video_id=doc["video_id"], query_id=doc["query_id"],
                pred_start=doc["pred_start"], pred_end=doc["pred_end"],
                gt_start=doc["gt_start"], gt_end=doc["gt_end"],
                iou=doc["iou"], extra=doc.get("extra", {})))
    return records, summary
