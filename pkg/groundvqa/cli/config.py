"""Loading, checking and hashing run configurations."""

import os

from groundvqa.core.errors import ConfigError
from groundvqa.core.modutils import safe_import
from groundvqa.core.utils import to_builtin, hash_dict, check_seeds_disjoint
from groundvqa.data import (RunConfig, PathConfig, SamplingConfig, SceneParams,
                            DatasetSplitSpec, VQATrainConfig, VQANetConfig, GrounderConfig,
                            GrounderTrainConfig, EMAConfig, ExternalEndpoint)
from groundvqa.core.prompts import PROMPT_MODES
from groundvqa.sim.splits import SPLIT_NAMES, default_splits
from groundvqa.objs.pipeline import ANSWER_SOURCES

tomllib = safe_import('tomllib') or safe_import('tomli')

###################################################################################################
###################################################################################################

## Settings & Globals
# Environment variable that overrides the data directory
DATA_ENV = 'GROUNDVQA_DATA'
DEFAULT_SCALE = 0.01

# Sections of the configuration that define the pipeline, and so enter the hash
HASHED_FIELDS = ('sampling', 'scene', 'splits', 'vqa', 'vqa_net', 'grounder',
                 'grounder_train', 'ema', 'seed')

###################################################################################################
###################################################################################################

def default_config():
    """Get the default run configuration."""

    return build_config({})


def load_config(path=None, env=None):
    """Load a run configuration from a TOML file.

    Parameters
    ----------
    path : Path or str, optional
        Configuration file. If not given, uses the defaults.
    env : dict, optional
        Environment variables. Defaults to `os.environ`.

    Returns
    -------
    RunConfig
        The configuration.

    Raises
    ------
    ConfigError
        If the file can not be read, has unknown keys, or has invalid values.
    ImportError
        If reading a file on a Python without `tomllib`, and `tomli` is not installed.
    """

    data = {}
    if path is not None:
        if not tomllib:
            raise ImportError("Optional dependency tomli is required for reading "
                              "configuration files on this version of Python.")
        try:
            with open(path, 'rb') as f_obj:
                data = tomllib.load(f_obj)
        except OSError as excp:
            raise ConfigError("Can not read configuration file {}: {}".format(\
                path, excp)) from excp
        except ValueError as excp:
            raise ConfigError("Configuration file {} is not valid TOML: {}".format(\
                path, excp)) from excp

    cfg = build_config(data)

    env = os.environ if env is None else env
    if env.get(DATA_ENV):
        cfg = cfg._replace(paths=cfg.paths._replace(data=env[DATA_ENV]))

    return cfg


def build_config(data):
    """Build a run configuration from a dictionary of configuration sections.

    Parameters
    ----------
    data : dict
        Sections, as read from a TOML file.

    Returns
    -------
    RunConfig
        The configuration, with defaults for anything not given.

    Raises
    ------
    ConfigError
        If there are unknown sections or keys, or invalid values.
    """

    data = dict(data)
    _check_keys(data, ('paths', 'sampling', 'scene', 'splits', 'vqa', 'grounder', 'ema',
                       'answers', 'external', 'run'), 'the configuration')

    run = _section(data, 'run', ('seed', 'n_jobs'))
    seed = run.get('seed', 0)

    vqa = _section(data, 'vqa', VQATrainConfig._fields + VQANetConfig._fields)
    grounder = _section(data, 'grounder', GrounderConfig._fields + ('train',))
    grounder_train = _section(grounder, 'train', GrounderTrainConfig._fields, 'grounder.train')
    answers = _section(data, 'answers', ('source', 'prompt_mode'))
    external = _section(data, 'external', ExternalEndpoint._fields)

    sampling = _build(SamplingConfig, _section(data, 'sampling', SamplingConfig._fields),
                      'sampling')
    grounder_cfg = _build(GrounderConfig, grounder, 'grounder')
    if 'max_sampled_frames' not in grounder:
        grounder_cfg = grounder_cfg._replace(max_sampled_frames=sampling.max_sampled_frames)

    cfg = RunConfig(
        paths=_build(PathConfig, _section(data, 'paths', PathConfig._fields), 'paths'),
        sampling=sampling,
        scene=_build(SceneParams, _section(data, 'scene', SceneParams._fields), 'scene'),
        splits=_build_splits(_section(data, 'splits', ('scale',) + \
            tuple('{}_{}'.format(name, key) for name in SPLIT_NAMES \
                for key in ('samples', 'seed')))),
        vqa=_build(VQATrainConfig, dict({'seed' : seed}, **{key : val for key, val \
            in vqa.items() if key in VQATrainConfig._fields}), 'vqa'),
        vqa_net=_build(VQANetConfig, {key : val for key, val in vqa.items() \
            if key in VQANetConfig._fields}, 'vqa'),
        grounder=grounder_cfg,
        grounder_train=_build(GrounderTrainConfig, dict({'seed' : seed}, **grounder_train),
                              'grounder.train'),
        ema=_build(EMAConfig, _section(data, 'ema', EMAConfig._fields), 'ema'),
        answers=answers.get('source', 'model'),
        prompt_mode=answers.get('prompt_mode', 'answer'),
        external=_build(ExternalEndpoint, external, 'external') if external else None,
        seed=seed,
        n_jobs=run.get('n_jobs', 1))

    check_config(cfg)

    return cfg


def check_config(cfg):
    """Check the values of a run configuration.

    Raises
    ------
    ConfigError
        If any value is invalid.
    """

    if cfg.answers not in ANSWER_SOURCES:
        raise ConfigError("Answer source '{}' not understood, expected one of "
                          "{}.".format(cfg.answers, ', '.join(ANSWER_SOURCES)))
    if cfg.prompt_mode not in PROMPT_MODES:
        raise ConfigError("Prompt mode '{}' not understood, expected one of "
                          "{}.".format(cfg.prompt_mode, ', '.join(PROMPT_MODES)))
    if cfg.answers == 'external' and cfg.external is None:
        raise ConfigError("External answers require an [external] section with a url.")
    if cfg.grounder.max_sampled_frames != cfg.sampling.max_sampled_frames:
        raise ConfigError("grounder.max_sampled_frames must equal "
                          "sampling.max_sampled_frames.")
    if cfg.grounder.d_model % cfg.grounder.n_heads:
        raise ConfigError("grounder.d_model must be divisible by grounder.n_heads.")
    if not 0. <= cfg.ema.beta <= 1.:
        raise ConfigError("ema.beta must be within [0, 1].")
    if cfg.sampling.target_fps <= 0:
        raise ConfigError("sampling.target_fps must be positive.")
    for label, value in [('vqa.lr', cfg.vqa.lr), ('grounder.train.lr', cfg.grounder_train.lr)]:
        if value <= 0:
            raise ConfigError("{} must be positive.".format(label))
    for label, value in [('vqa.epochs', cfg.vqa.epochs),
                         ('grounder.train.epochs', cfg.grounder_train.epochs)]:
        if value < 0:
            raise ConfigError("{} can not be negative.".format(label))
    try:
        check_seeds_disjoint({split.name : split.seed for split in cfg.splits})
    except ValueError as error:
        raise ConfigError("Split seeds: {}".format(error)) from error


def config_hash(cfg):
    """Compute the hash of the pipeline defining parts of a run configuration.

    Parameters
    ----------
    cfg : RunConfig
        Configuration to hash.

    Returns
    -------
    str
        First 16 hex characters of the SHA-256 of the canonical JSON of the configuration.

    Notes
    -----
    Paths, answer settings, the external endpoint and the number of jobs are excluded,
    as they do not change what the pipeline computes.
    """

    return hash_dict({field : to_builtin(getattr(cfg, field)) for field in HASHED_FIELDS})


def _section(data, name, allowed, label=None):
    """Get a section of the configuration, checking for unknown keys."""

    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError("[{}] must be a table.".format(label or name))
    _check_keys(section, allowed, '[{}]'.format(label or name))

    return dict(section)


def _check_keys(section, allowed, where):
    """Check that a section has no unknown keys."""

    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError("Unknown key(s) in {}: {}.".format(where, ', '.join(unknown)))


def _build(kind, values, where):
    """Build a settings object, turning type errors into configuration errors."""

    values = {key : val for key, val in values.items() if key in kind._fields}

    for key, val in values.items():
        default = kind._field_defaults.get(key)
        if default is None or type(val) is type(default):
            continue
        # Integers are accepted where floats are expected
        if isinstance(default, float) and isinstance(val, int) and not isinstance(val, bool):
            values[key] = float(val)
        else:
            raise ConfigError("[{}] {} has an invalid value: {!r}.".format(where, key, val))

    try:
        return kind(**values)
    except TypeError as excp:
        raise ConfigError("Invalid settings in [{}]: {}".format(where, excp)) from excp


def _build_splits(section):
    """Build the dataset split definitions."""

    splits = default_splits(section.get('scale', DEFAULT_SCALE))

    return tuple(DatasetSplitSpec(split.name,
                                  section.get('{}_samples'.format(split.name), split.num_samples),
                                  section.get('{}_seed'.format(split.name), split.seed)) \
                 for split in splits)
