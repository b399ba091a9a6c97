"""Tests for groundvqa.cli.config."""

from pytest import raises

from groundvqa.core.errors import ConfigError
from groundvqa.data import RunConfig, SamplingConfig, EMAConfig

from groundvqa.cli.config import *

###################################################################################################
###################################################################################################

def _write_toml(tmp_path, text):

    path = tmp_path / 'config.toml'
    path.write_text(text)

    return path

def test_default_config():

    cfg = default_config()

    assert isinstance(cfg, RunConfig)
    assert cfg.sampling == SamplingConfig()
    assert cfg.ema == EMAConfig()
    assert cfg.answers == 'model'
    assert cfg.prompt_mode == 'answer'
    assert cfg.external is None
    assert [split.num_samples for split in cfg.splits] == [19, 31, 19]
    assert [split.seed for split in cfg.splits] == [1, 2, 3]

def test_load_config(tmp_path, skip_if_no_toml):

    path = _write_toml(tmp_path, '\n'.join([
        '[sampling]', 'target_fps = 10', 'max_sampled_frames = 50',
        '[grounder]', 'd_model = 16', 'n_heads = 2',
        '[grounder.train]', 'epochs = 3',
        '[splits]', 'train_samples = 7',
        '[external]', 'url = "http://localhost:9000/answer"',
        '[run]', 'seed = 4']))
    cfg = load_config(path, env={})

    # Integers are accepted for float settings
    assert cfg.sampling.target_fps == 10.0
    assert cfg.grounder.max_sampled_frames == 50
    assert cfg.grounder.d_model == 16
    assert cfg.grounder_train.epochs == 3
    assert cfg.grounder_train.seed == 4
    assert cfg.vqa.seed == 4
    assert cfg.splits[0].num_samples == 7
    assert cfg.external.url == 'http://localhost:9000/answer'
    assert cfg.external.timeout == 10.0

def test_load_config_env(tmp_path):

    cfg = load_config(env={DATA_ENV : str(tmp_path)})
    assert cfg.paths.data == str(tmp_path)

    assert load_config(env={}).paths.data == 'data'

def test_load_config_errors(tmp_path, skip_if_no_toml):

    with raises(ConfigError):
        load_config(tmp_path / 'missing.toml', env={})

    for text in ['[sampling', '[sampling]\nfps = 5', '[unknown]\nkey = 1',
                 '[ema]\nbeta = 1.5', '[ema]\nbeta = "high"', '[answers]\nsource = "guess"',
                 '[answers]\nsource = "external"', '[grounder]\nd_model = 30\nn_heads = 4',
                 '[grounder]\nmax_sampled_frames = 10', '[splits]\nval_seed = 1',
                 '[vqa]\nlr = 0', 'sampling = 5']:
        with raises(ConfigError):
            load_config(_write_toml(tmp_path, text), env={})

def test_config_hash(tmp_path, skip_if_no_toml):

    base = config_hash(default_config())

    assert len(base) == 16
    assert config_hash(default_config()) == base

    # Paths and answer settings do not change the hash
    path = _write_toml(tmp_path, '[paths]\ndata = "elsewhere"\n[answers]\nsource = "oracle"')
    assert config_hash(load_config(path, env={})) == base

    path = _write_toml(tmp_path, '[ema]\nbeta = 0.99')
    assert config_hash(load_config(path, env={})) != base

def test_hashed_fields():

    assert set(HASHED_FIELDS) <= set(RunConfig._fields)
    assert 'paths' not in HASHED_FIELDS

def test_check_config_split_seeds():

    cfg = default_config()
    check_config(cfg)

    shared = tuple(split._replace(seed=5) for split in cfg.splits)
    with raises(ConfigError):
        check_config(cfg._replace(splits=shared))
