import numpy as np
import pytest

from videoground import FeatureSequence, QueryEmbedding


def orthonormal_directions(rng, dim, count):
    """Random orthonormal vectors via QR."""
    mat = rng.standard_normal((dim, count))
    q, _ = np.linalg.qr(mat)
    return q.T  # (count, dim)


def planted_video(rng, n_frames=300, dim=16, seg_len=(80, 150), noise=0.05,
                  frame_rate=1.0):
    """One high-similarity, cluster-distinct segment planted in a video.

    Returns (features, query, (start, end)) with the interval in frames.
    """
    u, v = orthonormal_directions(rng, dim, 2)
    length = int(rng.integers(seg_len[0], seg_len[1] + 1))
    start = int(rng.integers(0, n_frames - length + 1))
    end = start + length
    data = v + noise * rng.standard_normal((n_frames, dim))
    data[start:end] = u + noise * rng.standard_normal((length, dim))
    features = FeatureSequence(data.astype(np.float32), frame_rate)
    query = QueryEmbedding(u.astype(np.float32))
    return features, query, (start, end)


def piecewise_constant_video(rng, n_segments=3, seg_len=(30, 70), dim=16,
                             noise=0.15, frame_rate=1.0):
    """Consecutive constant blocks with gaussian noise.

    Returns (features, list of (start, end) frame intervals).
    """
    dirs = orthonormal_directions(rng, dim, n_segments)
    blocks = []
    bounds = []
    pos = 0
    for i in range(n_segments):
        length = int(rng.integers(seg_len[0], seg_len[1] + 1))
        blocks.append(dirs[i] + noise * rng.standard_normal((length, dim)))
        bounds.append((pos, pos + length))
        pos += length
    data = np.concatenate(blocks).astype(np.float32)
    return FeatureSequence(data, frame_rate), bounds


def distractor_video(rng, n_frames=300, dim=16, noise=0.05, frame_rate=1.0):
    """A target segment plus a distractor whose similarity skews heavy-tailed.

    The distractor's frames point partly toward the query with a skewed
    per-frame mixing weight, so a few of its frames score very high while
    most score modestly.
    Returns (features, query, target (start, end)).
    """
    u, v, w = orthonormal_directions(rng, dim, 3)
    data = np.tile(v, (n_frames, 1)) + noise * rng.standard_normal((n_frames, dim))

    t_len = int(rng.integers(70, 110))
    t_start = int(rng.integers(0, n_frames // 2 - t_len))
    data[t_start:t_start + t_len] = (0.8 * u + 0.6 * w
                                     + noise * rng.standard_normal((t_len, dim)))

    d_len = int(rng.integers(40, 70))
    d_start = int(rng.integers(n_frames // 2, n_frames - d_len))
    # Log-normal mixing: rare frames align with the query almost perfectly.
    alpha = np.minimum(0.35 * rng.lognormal(0.0, 0.9, size=d_len), 1.0)
    beta = np.sqrt(1.0 - alpha ** 2)
    data[d_start:d_start + d_len] = (alpha[:, None] * u + beta[:, None] * w
                                     + noise * rng.standard_normal((d_len, dim)))

    features = FeatureSequence(data.astype(np.float32), frame_rate)
    query = QueryEmbedding(u.astype(np.float32))
    return features, query, (t_start, t_start + t_len)


def frame_iou(pred, gt):
    inter = max(0, min(pred[1], gt[1]) - max(pred[0], gt[0]))
    union = max(pred[1], gt[1]) - min(pred[0], gt[0])
    return inter / union


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
