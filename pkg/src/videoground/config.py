"""Pipeline configuration shared by every stage."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Optional

import yaml


class ConfigError(ValueError):
    """Raised when a configuration document or value is invalid."""


POOLING_KERNELS = ("uniform", "gaussian")
NORMALIZATIONS = ("none", "box_cox", "yeo_johnson")
LAMBDA_MODES = ("auto_mle", "fixed")

# Short aliases accepted in config files and mirrored by CLI flags.
_ALIASES = {
    "w": "pooling_window",
    "k": "num_clusters",
    "r": "coherence_window",
    "sigma": "gaussian_sigma",
    "seed": "clustering_seed",
    "max_iters": "clustering_max_iters",
    "lambda": "fixed_lambda",
}


@dataclass(frozen=True)
class PipelineConfig:
    """Validated settings for the full grounding pipeline.

    Defaults are the published operating point: pooling window 21,
    9 clusters, coherence window 7, Box-Cox adjustment with the
    exponent fitted by maximum likelihood.
    """

    pooling_window: int = 21          # w: sliding-window size, odd
    pooling_kernel: str = "uniform"   # uniform | gaussian
    gaussian_sigma: Optional[float] = None  # required iff kernel is gaussian
    num_clusters: int = 9             # k
    coherence_window: int = 7         # r: clustering window, odd; r=1 is naive k-means
    clustering_max_iters: int = 100
    clustering_seed: int = 0          # 64-bit unsigned
    normalization: str = "box_cox"    # none | box_cox | yeo_johnson
    lambda_mode: str = "auto_mle"     # auto_mle | fixed
    fixed_lambda: Optional[float] = None    # required iff lambda_mode is fixed

    def __post_init__(self) -> None:
        _require_odd_positive("pooling_window (w)", self.pooling_window)
        _require_odd_positive("coherence_window (r)", self.coherence_window)
        if not isinstance(self.num_clusters, int) or self.num_clusters < 1:
            raise ConfigError("num_clusters (k) must be a positive integer")
        if not isinstance(self.clustering_max_iters, int) or self.clustering_max_iters < 1:
            raise ConfigError("clustering_max_iters must be a positive integer")
        if (not isinstance(self.clustering_seed, int)
                or not 0 <= self.clustering_seed < 2 ** 64):
            raise ConfigError("clustering_seed must be a 64-bit unsigned integer")
        if self.pooling_kernel not in POOLING_KERNELS:
            raise ConfigError(
                f"pooling_kernel must be one of {POOLING_KERNELS}, got {self.pooling_kernel!r}")
        if self.pooling_kernel == "gaussian":
            if self.gaussian_sigma is None or not self.gaussian_sigma > 0:
                raise ConfigError("gaussian_sigma must be > 0 for the gaussian kernel")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(
                f"normalization must be one of {NORMALIZATIONS}, got {self.normalization!r}")
        if self.lambda_mode not in LAMBDA_MODES:
            raise ConfigError(
                f"lambda_mode must be one of {LAMBDA_MODES}, got {self.lambda_mode!r}")
        if self.lambda_mode == "fixed" and self.fixed_lambda is None:
            raise ConfigError("fixed_lambda (lambda) is required when lambda_mode is 'fixed'")

    def replace(self, **changes: Any) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        return {key: val for key, val in out.items() if val is not None}

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _require_odd_positive(name: str, value: Any) -> None:
    if not isinstance(value, int) or value < 1:
        raise ConfigError(f"{name} must be a positive integer")
    if value % 2 == 0:
        raise ConfigError(f"{name} must be odd")


def config_from_dict(doc: dict) -> PipelineConfig:
    """Build a config from a plain mapping, resolving short aliases."""
    fields = {f.name for f in dataclasses.fields(PipelineConfig)}
    kwargs: dict[str, Any] = {}
    for key, value in doc.items():
        name = _ALIASES.get(key, key)
        if name not in fields:
            raise ConfigError(f"unknown config field {key!r}")
        if name in kwargs:
            raise ConfigError(f"config field {key!r} given twice (alias clash)")
        kwargs[name] = value
    if "fixed_lambda" in kwargs and "lambda_mode" not in kwargs:
        kwargs["lambda_mode"] = "fixed"
    return PipelineConfig(**kwargs)


def load_config(source: str) -> PipelineConfig:
    """Parse a YAML/JSON config document; missing fields take the defaults.

    An empty document yields the default configuration.
    """
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    return config_from_dict(doc)


def load_config_file(path: str) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read())
