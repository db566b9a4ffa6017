import pytest

from videoground import PipelineConfig, load_config
from videoground.config import ConfigError, config_from_dict


def test_defaults_match_published_values():
    cfg = load_config("")
    assert cfg.pooling_window == 21
    assert cfg.num_clusters == 9
    assert cfg.coherence_window == 7
    assert cfg.normalization == "box_cox"
    assert cfg.lambda_mode == "auto_mle"
    assert cfg.pooling_kernel == "uniform"
    assert cfg.clustering_max_iters == 100
    assert cfg.clustering_seed == 0


def test_even_window_rejected_with_field_name():
    with pytest.raises(ConfigError, match=r"w.*must be odd"):
        load_config("w: 4")


def test_minimal_boundary_config():
    cfg = load_config("{k: 1, w: 1, r: 1}")
    assert (cfg.num_clusters, cfg.pooling_window, cfg.coherence_window) == (1, 1, 1)


def test_r_zero_disallowed():
    with pytest.raises(ConfigError):
        load_config("r: 0")


@pytest.mark.parametrize("doc", [
    "w: -3", "k: 0", "r: 2", "clustering_max_iters: 0",
    "clustering_seed: -1", "normalization: zscore", "lambda_mode: magic",
    "pooling_kernel: box", "unknown_field: 1",
])
def test_constraint_violations(doc):
    with pytest.raises(ConfigError):
        load_config(doc)


def test_gaussian_requires_sigma():
    with pytest.raises(ConfigError, match="gaussian_sigma"):
        load_config("pooling_kernel: gaussian")
    cfg = load_config("pooling_kernel: gaussian\nsigma: 4.0")
    assert cfg.gaussian_sigma == 4.0


def test_fixed_lambda_alias_implies_fixed_mode():
    cfg = load_config("lambda: 0.5")
    assert cfg.lambda_mode == "fixed"
    assert cfg.fixed_lambda == 0.5


def test_fixed_mode_requires_lambda():
    with pytest.raises(ConfigError, match="fixed_lambda"):
        load_config("lambda_mode: fixed")


def test_parse_failure():
    with pytest.raises(ConfigError, match="parse"):
        load_config("w: [unbalanced")
    with pytest.raises(ConfigError, match="mapping"):
        load_config("- just\n- a\n- list")


def test_serialize_round_trip():
    cfg = PipelineConfig(pooling_window=5, pooling_kernel="gaussian",
                         gaussian_sigma=2.0, num_clusters=4,
                         coherence_window=3, clustering_seed=42,
                         normalization="yeo_johnson",
                         lambda_mode="fixed", fixed_lambda=-0.3)
    assert load_config(cfg.to_yaml()) == cfg
    assert load_config(PipelineConfig().to_yaml()) == PipelineConfig()


def test_alias_clash_rejected():
    with pytest.raises(ConfigError, match="twice"):
        config_from_dict({"w": 3, "pooling_window": 5})
