"""Command-line interface: `videoground ground` and `videoground evaluate`."""
from __future__ import annotations

import sys

import click

from . import io as vio
from .config import PipelineConfig, load_config_file
from .metrics import NoiseAugmentation, clusters_per_gt, evaluate, insert_noise_prefix
from .pipeline import MomentGrounder

_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="YAML config file; flags override it."),
    click.option("--w", "pooling_window", type=int, default=None,
                 help="Temporal pooling window size (odd)."),
    click.option("--pooling-kernel", type=click.Choice(["uniform", "gaussian"]),
                 default=None),
    click.option("--sigma", "gaussian_sigma", type=float, default=None,
                 help="Gaussian kernel width (with --pooling-kernel gaussian)."),
    click.option("--k", "num_clusters", type=int, default=None,
                 help="Number of clusters."),
    click.option("--r", "coherence_window", type=int, default=None,
                 help="Clustering coherence window (odd; 1 = naive k-means)."),
    click.option("--max-iters", "clustering_max_iters", type=int, default=None),
    click.option("--seed", "clustering_seed", type=int, default=None),
    click.option("--normalization",
                 type=click.Choice(["none", "box-cox", "yeo-johnson"]),
                 default=None),
    click.option("--lambda", "fixed_lambda", type=float, default=None,
                 help="Fixed transform exponent (otherwise fitted by MLE)."),
]


def _with_config_options(cmd):
    for opt in reversed(_CONFIG_OPTIONS):
        cmd = opt(cmd)
    return cmd


def _build_config(config_path, **overrides) -> PipelineConfig:
    cfg = load_config_file(config_path) if config_path else PipelineConfig()
    changes = {}
    for name, value in overrides.items():
        if value is None:
            continue
        if name == "normalization":
            value = value.replace("-", "_")
        changes[name] = value
    if "fixed_lambda" in changes and "lambda_mode" not in changes:
        changes["lambda_mode"] = "fixed"
    return cfg.replace(**changes) if changes else cfg


@click.group()
def main():
    """Training-free video temporal grounding."""


@main.command()
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True), help="TAGF feature file.")
@click.option("--query", "query_paths", required=True, multiple=True,
              type=click.Path(exists=True),
              help="TAGF query vector file (repeatable).")
@click.option("--dump-proposals", is_flag=True,
              help="Print the ranked proposal list.")
@_with_config_options
def ground(features_path, query_paths, dump_proposals, config_path, **overrides):
    """Locate the moment matching the query in one video."""
    cfg = _build_config(config_path, **overrides)
    features = vio.read_feature_file(features_path)
    queries = [vio.read_query_file(p) for p in query_paths]
    grounder = MomentGrounder.from_config(cfg)
    if len(queries) == 1:
        result = grounder.predict(features, queries[0], keep_ranked=dump_proposals)
    else:
        result = grounder.predict_multi(features, queries,
                                        keep_ranked=dump_proposals)
    click.echo(f"frames [{result.start_frame}, {result.end_frame})  "
               f"seconds [{result.start_sec:.3f}, {result.end_sec:.3f})  "
               f"score {result.score:.6f}")
    if result.lmbda is not None:
        click.echo(f"adjustment: lambda={result.lmbda:.5f} shift={result.shift:.6g}")
    if dump_proposals:
        for i, p in enumerate(result.ranked):
            click.echo(f"#{i + 1}: frames [{p.start}, {p.end}) "
                       f"score {p.score:.6f}")


@main.command(name="evaluate")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True))
@click.option("--thresholds", default="0.3,0.5,0.7", show_default=True,
              help="Comma-separated IoU thresholds for R@m.")
@click.option("--noise-rho", type=float, default=None,
              help="Prepend this many seconds of synthetic frames per video.")
@click.option("--noise-seed", type=int, default=0, show_default=True)
@click.option("--fragmentation", is_flag=True,
              help="Also report mean label runs per ground-truth interval.")
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Write a JSON-lines report here.")
@_with_config_options
def evaluate_cmd(manifest_path, thresholds, noise_rho, noise_seed,
                 fragmentation, report_path, config_path, **overrides):
    """Run the pipeline over a manifest and report R@m / mIoU."""
    cfg = _build_config(config_path, **overrides)
    try:
        ms = [float(t) for t in thresholds.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"bad thresholds {thresholds!r}")
    manifest = vio.load_manifest(manifest_path)
    if not len(manifest):
        raise click.ClickException("manifest is empty")
    grounder = MomentGrounder.from_config(cfg)
    records = []
    frag_counts = []
    for rec in manifest:
        features = vio.read_feature_file(rec.feature_path)
        query = vio.read_query_file(rec.query_embedding_path)
        gt = (rec.gt_start, rec.gt_end)
        if noise_rho is not None:
            aug = NoiseAugmentation(rho=noise_rho, seed=noise_seed)
            features, gt = insert_noise_prefix(features, gt, aug)
        result = grounder.predict(features, query)
        iou = 0.0
        from .metrics import interval_iou
        iou = interval_iou(result.interval_sec, gt)
        extra = {}
        if fragmentation:
            fps = features.frame_rate
            gt_frames = (int(gt[0] * fps), max(int(gt[0] * fps) + 1,
                                               int(round(gt[1] * fps))))
            gt_frames = (gt_frames[0], min(gt_frames[1], features.n_frames))
            runs = clusters_per_gt(grounder.labels_, gt_frames)
            frag_counts.append(runs)
            extra["clusters_per_gt"] = runs
        records.append(vio.GroundingRecord(
            video_id=rec.video_id, query_id=rec.query_id,
            pred_start=result.start_sec, pred_end=result.end_sec,
            gt_start=gt[0], gt_end=gt[1], iou=iou, extra=extra))
    summary = evaluate([((r.pred_start, r.pred_end), (r.gt_start, r.gt_end))
                        for r in records], ms)
    out = summary.to_dict()
    if fragmentation:
        out["mean_clusters_per_gt"] = sum(frag_counts) / len(frag_counts)
    if report_path:
        vio.write_report(records, report_path, summary=out)
    click.echo(f"records: {out['n_records']}")
    for name, val in out["recalls"].items():
        click.echo(f"{name}: {val:.4f}")
    click.echo(f"mIoU: {out['mIoU']:.4f}")
    if fragmentation:
        click.echo(f"mean clusters per GT: {out['mean_clusters_per_gt']:.3f}")


if __name__ == "__main__":
    sys.exit(main())
