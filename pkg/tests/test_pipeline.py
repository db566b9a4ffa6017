import json

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import frame_iou, planted_video
from videoground import (FeatureSequence, MomentGrounder, PipelineConfig,
                         QueryEmbedding, read_report, write_feature_file,
                         write_query_file)
from videoground.cli import main


def test_from_config_round_trip():
    cfg = PipelineConfig(num_clusters=4, coherence_window=3)
    grounder = MomentGrounder.from_config(cfg)
    assert grounder.config() == cfg


def test_predict_exposes_diagnostics(rng):
    features, query, _ = planted_video(rng, n_frames=120, seg_len=(30, 50))
    grounder = MomentGrounder()
    result = grounder.predict(features, query)
    assert 0 <= result.start_frame < result.end_frame <= 120
    assert grounder.labels_.shape == (120,)
    assert grounder.change_points_.points[0] == 0
    assert grounder.change_points_.points[-1] == 120
    assert (result.start_frame, result.end_frame) in set(grounder.proposals_.pairs)


def test_predict_accepts_plain_array(rng):
    features, query, _ = planted_video(rng, n_frames=100, seg_len=(30, 40))
    grounder = MomentGrounder()
    r1 = grounder.predict(features, query)
    r2 = grounder.predict(features, query.vector)
    assert (r1.start_frame, r1.end_frame) == (r2.start_frame, r2.end_frame)


def test_multi_query_single_reduction(rng):
    features, query, _ = planted_video(rng, n_frames=100, seg_len=(30, 40))
    grounder = MomentGrounder()
    single = grounder.predict(features, query)
    multi = grounder.predict_multi(features, [query])
    assert (single.start_frame, single.end_frame) == \
        (multi.start_frame, multi.end_frame)


def test_multi_query_requires_queries(rng):
    features, _, _ = planted_video(rng, n_frames=60, seg_len=(20, 30))
    with pytest.raises(ValueError):
        MomentGrounder().predict_multi(features, [])


def test_seconds_mapping(rng):
    features, query, gt = planted_video(rng, n_frames=100, seg_len=(40, 60),
                                        frame_rate=4.0)
    result = MomentGrounder().predict(features, query)
    assert result.start_sec == result.start_frame / 4.0
    assert result.end_sec == result.end_frame / 4.0


def _write_fixture(tmp_path, rng, **kw):
    features, query, gt = planted_video(rng, **kw)
    fpath = tmp_path / "video.tagf"
    qpath = tmp_path / "query.tagf"
    write_feature_file(features, str(fpath))
    write_query_file(query, str(qpath))
    return fpath, qpath, features, gt


def test_cli_ground(tmp_path, rng):
    fpath, qpath, features, gt = _write_fixture(tmp_path, rng)
    runner = CliRunner()
    res = runner.invoke(main, ["ground", "--features", str(fpath),
                               "--query", str(qpath)])
    assert res.exit_code == 0, res.output
    assert "frames [" in res.output
    assert "lambda=" in res.output


def test_cli_ground_dump_proposals_and_overrides(tmp_path, rng):
    fpath, qpath, *_ = _write_fixture(tmp_path, rng, n_frames=80,
                                      seg_len=(20, 40))
    runner = CliRunner()
    res = runner.invoke(main, ["ground", "--features", str(fpath),
                               "--query", str(qpath), "--dump-proposals",
                               "--k", "3", "--r", "1", "--w", "1",
                               "--normalization", "none"])
    assert res.exit_code == 0, res.output
    assert "#1:" in res.output


def test_cli_ground_multi_query(tmp_path, rng):
    fpath, qpath, features, _ = _write_fixture(tmp_path, rng, n_frames=80,
                                               seg_len=(20, 40))
    q2 = tmp_path / "q2.tagf"
    write_query_file(QueryEmbedding(
        rng.standard_normal(features.dim).astype(np.float32)), str(q2))
    runner = CliRunner()
    res = runner.invoke(main, ["ground", "--features", str(fpath),
                               "--query", str(qpath), "--query", str(q2)])
    assert res.exit_code == 0, res.output


def test_cli_config_file_with_flag_override(tmp_path, rng):
    fpath, qpath, *_ = _write_fixture(tmp_path, rng, n_frames=80,
                                      seg_len=(20, 40))
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("k: 4\nw: 5\n")
    runner = CliRunner()
    res = runner.invoke(main, ["ground", "--features", str(fpath),
                               "--query", str(qpath), "--config", str(cfg),
                               "--k", "2"])
    assert res.exit_code == 0, res.output


def test_cli_evaluate_with_report(tmp_path, rng):
    lines = []
    for i in range(4):
        sub = tmp_path / f"v{i}"
        sub.mkdir()
        fpath, qpath, features, gt = _write_fixture(sub, rng, n_frames=150,
                                                    seg_len=(40, 70))
        lines.append({"video_id": f"v{i}", "feature_path": str(fpath),
                      "query_id": f"q{i}", "query_embedding_path": str(qpath),
                      "gt_start": float(gt[0]), "gt_end": float(gt[1])})
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    report = tmp_path / "report.jsonl"
    runner = CliRunner()
    res = runner.invoke(main, ["evaluate", "--manifest", str(manifest),
                               "--thresholds", "0.3,0.5,0.7",
                               "--fragmentation",
                               "--report", str(report)])
    assert res.exit_code == 0, res.output
    assert "mIoU:" in res.output
    assert "mean clusters per GT:" in res.output
    records, summary = read_report(str(report))
    assert len(records) == 4
    assert summary["n_records"] == 4
    assert all("clusters_per_gt" in r.extra for r in records)
    # Planted segments should be easy: expect strong IoU.
    assert summary["mIoU"] > 0.8


def test_cli_evaluate_with_noise_prefix(tmp_path, rng):
    sub = tmp_path / "v"
    sub.mkdir()
    fpath, qpath, features, gt = _write_fixture(sub, rng, n_frames=150,
                                                seg_len=(40, 70))
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(json.dumps(
        {"video_id": "v", "feature_path": str(fpath), "query_id": "q",
         "query_embedding_path": str(qpath), "gt_start": float(gt[0]),
         "gt_end": float(gt[1])}) + "\n")
    runner = CliRunner()
    res = runner.invoke(main, ["evaluate", "--manifest", str(manifest),
                               "--noise-rho", "30", "--noise-seed", "5"])
    assert res.exit_code == 0, res.output
    assert "mIoU:" in res.output


def test_cli_bad_thresholds(tmp_path, rng):
    sub = tmp_path / "v"
    sub.mkdir()
    fpath, qpath, _, gt = _write_fixture(sub, rng, n_frames=60,
                                         seg_len=(20, 30))
    manifest = tmp_path / "m.jsonl"
    manifest.write_text(json.dumps(
        {"video_id": "v", "feature_path": str(fpath), "query_id": "q",
         "query_embedding_path": str(qpath), "gt_start": float(gt[0]),
         "gt_end": float(gt[1])}) + "\n")
    runner = CliRunner()
    res = runner.invoke(main, ["evaluate", "--manifest", str(manifest),
                               "--thresholds", "abc"])
    assert res.exit_code != 0


def test_pipeline_recovers_planted_segment(rng):
    grounder = MomentGrounder()
    hits = 0
    for _ in range(10):
        features, query, gt = planted_video(rng)
        result = grounder.predict(features, query)
        if frame_iou((result.start_frame, result.end_frame), gt) >= 0.9:
            hits += 1
    assert hits >= 9
