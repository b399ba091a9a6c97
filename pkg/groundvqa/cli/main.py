"""The `groundvqa` command: generate data, train, run inference and evaluate."""

import os
import sys
import argparse

from groundvqa.core.errors import (GroundVQAError, ConfigError, NoDataError, NoModelError,
                                   AnswersUnavailableError)
from groundvqa.core.io import (fpath, check_output, save_json, read_annotations,
                               read_annotation_info, write_predictions, read_predictions)
from groundvqa.core.strings import gen_split_summary_str, gen_hota_report_str
from groundvqa.core.utils import check_config_hash, to_builtin
from groundvqa.core.prompts import PROMPT_MODES
from groundvqa.sim.splits import (ANNOTATION_FILE, MANIFEST_FILE, UNANSWERED_SPLITS,
                                  build_split, ArchiveFrames)
from groundvqa.objs.vqa import VQAModelState, train_vqa
from groundvqa.objs.grounder import GrounderState, train_grounder, load_tagged_parameters
from groundvqa.objs.pipeline import ANSWER_SOURCES, predict_split, evaluate_predictions
from groundvqa.analysis.hota import write_report
from groundvqa.cli.config import load_config, config_hash
from groundvqa.version import __version__

###################################################################################################
###################################################################################################

## Settings & Globals
# Artifact file names
VQA_CKPT = 'vqa.ckpt'
VQA_META = 'vqa.json'
GROUNDER_CKPT = 'grounder.ckpt'
GROUNDER_EMA_CKPT = 'grounder_ema.ckpt'
GROUNDER_META = 'grounder.json'
PREDICTIONS_FILE = 'predictions_{}.json'
REPORT_FILE = 'hota_{}.json'

###################################################################################################
###################################################################################################

def cmd_gen_data(cfg, force=False, progress=None, verbose=True):
    """Generate every dataset split, with frames, annotations and manifests.

    Parameters
    ----------
    cfg : RunConfig
        Run configuration.
    force : bool, optional, default: False
        Whether to overwrite existing splits.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use.
    verbose : bool, optional, default: True
        Whether to print out status updates.

    Returns
    -------
    dict of {str : list of QASample}
        Samples of each split.
    """

    chash = config_hash(cfg)
    manifest_path = os.path.join(cfg.paths.data, MANIFEST_FILE)
    check_output(manifest_path, force)

    out = {}
    for split in cfg.splits:
        samples, _ = build_split(split, os.path.join(cfg.paths.data, split.name), cfg.scene,
                                 force, cfg.n_jobs, progress, {'config_hash' : chash}, verbose)
        out[split.name] = samples
        if verbose:
            print(gen_split_summary_str(split, samples, concise=True))

    save_json({'config_hash' : chash,
               'splits' : [to_builtin(split) for split in cfg.splits],
               'scene_params' : to_builtin(cfg.scene)}, manifest_path)

    return out


def cmd_train(cfg, stage, force=False, progress=None, verbose=True):
    """Train one stage of the pipeline on the train split.

    Parameters
    ----------
    cfg : RunConfig
        Run configuration.
    stage : {'vqa', 'grounder'}
        Which stage to train.
    force : bool, optional, default: False
        Whether to overwrite existing checkpoints.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use.
    verbose : bool, optional, default: True
        Whether to print out status updates.

    Returns
    -------
    VQAModelState or GrounderState
        The trained state.

    Raises
    ------
    ConfigError
        If the train split was generated with another configuration.
    OutputExistsError
        If checkpoints exist, and `force` is not set.
    """

    if stage not in ('vqa', 'grounder'):
        raise ValueError("Stage {} not understood.".format(stage))

    chash = config_hash(cfg)
    samples, frames = _load_split(cfg, 'train', chash)
    os.makedirs(cfg.paths.checkpoints, exist_ok=True)
    ckpts = cfg.paths.checkpoints

    if stage == 'vqa':
        for file_name in (VQA_CKPT, VQA_META):
            check_output(fpath(ckpts, file_name), force)
        state = train_vqa(samples, frames, cfg.vqa, cfg.vqa_net, sampling=cfg.sampling,
                          progress=progress, verbose=verbose)
        state.save(fpath(ckpts, VQA_CKPT), fpath(ckpts, VQA_META), chash)
        return state

    for file_name in (GROUNDER_CKPT, GROUNDER_EMA_CKPT, GROUNDER_META):
        check_output(fpath(ckpts, file_name), force)
    state, ema = train_grounder(samples, frames, cfg.grounder_train, cfg.grounder, cfg.ema,
                                cfg.sampling, cfg.prompt_mode, progress, verbose)
    if ema is None and os.path.exists(fpath(ckpts, GROUNDER_EMA_CKPT)):
        os.remove(fpath(ckpts, GROUNDER_EMA_CKPT))
    state.save(fpath(ckpts, GROUNDER_CKPT), fpath(ckpts, GROUNDER_META), chash,
               ema, fpath(ckpts, GROUNDER_EMA_CKPT))

    return state


def cmd_infer(cfg, split, raw_weights=False, force=False, progress=None, verbose=True):
    """Run the two-stage pipeline on a split, writing a prediction file.

    Parameters
    ----------
    cfg : RunConfig
        Run configuration. Its answer source and prompt mode are used.
    split : str
        Name of the split to predict.
    raw_weights : bool, optional, default: False
        Whether to use the trained grounder parameters, instead of their average.
    force : bool, optional, default: False
        Whether to overwrite an existing prediction file.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use.
    verbose : bool, optional, default: True
        Whether to print out status updates.

    Returns
    -------
    list of Prediction
        The predictions.

    Raises
    ------
    AnswersUnavailableError
        If oracle answers are requested on a split without answers.
    ConfigError
        If the inputs were produced with another configuration, or the grounder was
        trained with another prompt mode.
    """

    chash = config_hash(cfg)
    out_path = os.path.join(cfg.paths.reports, PREDICTIONS_FILE.format(split))
    check_output(out_path, force)

    samples, frames = _load_split(cfg, split, chash)
    if cfg.prompt_mode == 'answer' and cfg.answers == 'oracle' and split in UNANSWERED_SPLITS:
        raise AnswersUnavailableError("Answers unavailable: the {} split has no "
                                      "annotated answers.".format(split))

    ckpts = cfg.paths.checkpoints
    _require_model(ckpts, (GROUNDER_CKPT, GROUNDER_META), 'grounder')
    grounder = GrounderState.load(fpath(ckpts, GROUNDER_CKPT), fpath(ckpts, GROUNDER_META),
                                  chash)
    if grounder.prompt_mode != cfg.prompt_mode:
        raise ConfigError("The grounder was trained with '{}' prompts, but '{}' prompts "
                          "were requested.".format(grounder.prompt_mode, cfg.prompt_mode))

    weights = 'raw'
    if not raw_weights and os.path.exists(fpath(ckpts, GROUNDER_EMA_CKPT)):
        grounder.load_parameters(load_tagged_parameters(fpath(ckpts, GROUNDER_EMA_CKPT),
                                                        'ema', chash))
        weights = 'ema'

    vqa = None
    if cfg.answers == 'model' and cfg.prompt_mode == 'answer':
        _require_model(ckpts, (VQA_CKPT, VQA_META), 'vqa')
        vqa = VQAModelState.load(fpath(ckpts, VQA_CKPT), fpath(ckpts, VQA_META), chash)

    predictions = predict_split(samples, frames, grounder, cfg.answers, vqa, cfg.external,
                                cfg.prompt_mode, progress, verbose)

    os.makedirs(cfg.paths.reports, exist_ok=True)
    videos = list({sample.video.video_id : sample.video for sample in samples}.values())
    write_predictions(out_path, predictions, videos,
                      info={'config_hash' : chash, 'split' : split, 'answers' : cfg.answers,
                            'prompt_mode' : cfg.prompt_mode, 'weights' : weights})

    return predictions


def cmd_eval(cfg, predictions, annotations, report=None, force=False, verbose=True):
    """Evaluate a prediction file against an annotation file with HOTA.

    Parameters
    ----------
    cfg : RunConfig
        Run configuration, which sets the default report location.
    predictions : Path or str
        Prediction file. Annotation files can also be used, scoring their ground truth.
    annotations : Path or str
        Annotation file.
    report : Path or str, optional
        Report file to write. Defaults to 'hota_<name>.json' in the reports directory.
    force : bool, optional, default: False
        Whether to overwrite an existing report.
    verbose : bool, optional, default: True
        Whether to print out the full report.

    Returns
    -------
    HOTAReport
        Evaluation results.

    Raises
    ------
    ConfigError
        If the predictions and annotations were produced with different configurations.
    """

    for path in (predictions, annotations):
        if not os.path.exists(path):
            raise NoDataError("File {} does not exist, can not proceed.".format(path))

    pred_hash = read_annotation_info(predictions).get('config_hash')
    gt_hash = read_annotation_info(annotations).get('config_hash')
    check_config_hash(gt_hash, pred_hash, predictions)

    if report is None:
        name = os.path.splitext(os.path.basename(str(predictions)))[0]
        name = name[len('predictions_'):] if name.startswith('predictions_') else name
        report = os.path.join(cfg.paths.reports, REPORT_FILE.format(name))
    check_output(report, force)

    results = evaluate_predictions(read_annotations(annotations),
                                   read_predictions(predictions))

    if os.path.dirname(str(report)):
        os.makedirs(os.path.dirname(str(report)), exist_ok=True)
    write_report(results, report, info={'config_hash' : gt_hash} if gt_hash else None)

    if verbose:
        print(gen_hota_report_str(results))

    return results


def create_parser():
    """Create the command line argument parser."""

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='TOML configuration file.')
    common.add_argument('--force', action='store_true', help='Overwrite existing outputs.')
    common.add_argument('--progress', choices=['tqdm'], default=None,
                        help='Show progress bars.')
    common.add_argument('--quiet', action='store_true', help='Only print results.')

    parser = argparse.ArgumentParser(prog='groundvqa',
                                     description='Two-stage grounded video question answering.')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('gen-data', parents=[common], help='Generate the synthetic dataset.')

    train = commands.add_parser('train', parents=[common], help='Train a pipeline stage.')
    train.add_argument('--stage', choices=['vqa', 'grounder'], required=True)
    train.add_argument('--no-ema', action='store_true',
                       help='Do not keep an average of the grounder parameters.')
    train.add_argument('--prompt-mode', choices=PROMPT_MODES, default=None)

    infer = commands.add_parser('infer', parents=[common], help='Predict tracks for a split.')
    infer.add_argument('--split', required=True)
    infer.add_argument('--answers', choices=ANSWER_SOURCES, default=None)
    infer.add_argument('--prompt-mode', choices=PROMPT_MODES, default=None)
    infer.add_argument('--raw-weights', action='store_true',
                       help='Use the trained grounder parameters instead of their average.')

    evaluate = commands.add_parser('eval', parents=[common], help='Evaluate predictions.')
    evaluate.add_argument('--predictions', required=True)
    evaluate.add_argument('--annotations', required=True)
    evaluate.add_argument('--report', default=None)

    return parser


def main(argv=None):
    """Run the `groundvqa` command.

    Parameters
    ----------
    argv : list of str, optional
        Arguments. Defaults to the process arguments.

    Returns
    -------
    int
        Exit code: 0 on success, 1 on a pipeline error.
    """

    args = create_parser().parse_args(argv)
    verbose = not args.quiet

    try:

        cfg = load_config(args.config)
        if getattr(args, 'answers', None):
            cfg = cfg._replace(answers=args.answers)
        if getattr(args, 'prompt_mode', None):
            cfg = cfg._replace(prompt_mode=args.prompt_mode)
        if getattr(args, 'no_ema', False):
            cfg = cfg._replace(ema=cfg.ema._replace(enabled=False))

        if args.command == 'gen-data':
            cmd_gen_data(cfg, args.force, args.progress, verbose)
        elif args.command == 'train':
            cmd_train(cfg, args.stage, args.force, args.progress, verbose)
        elif args.command == 'infer':
            cmd_infer(cfg, args.split, args.raw_weights, args.force, args.progress, verbose)
        elif args.command == 'eval':
            results = cmd_eval(cfg, args.predictions, args.annotations, args.report,
                               args.force, verbose)
            print('HOTA={}'.format(results.hota))

    except GroundVQAError as excp:
        print('error: {}: {}'.format(type(excp).__name__, excp), file=sys.stderr)
        return 1

    return 0


def _load_split(cfg, split, chash):
    """Load the samples of a split and a frame source for them, checking the config hash."""

    split_dir = os.path.join(cfg.paths.data, split)
    ann_path = os.path.join(split_dir, ANNOTATION_FILE)
    if not os.path.exists(ann_path):
        raise NoDataError("No annotations found for the {} split at {}: run "
                          "`groundvqa gen-data` first.".format(split, ann_path))

    check_config_hash(chash, read_annotation_info(ann_path).get('config_hash'), ann_path)

    return read_annotations(ann_path), ArchiveFrames(split_dir)


def _require_model(ckpts, file_names, stage):
    """Check that the files of a trained stage exist."""

    for file_name in file_names:
        if not os.path.exists(fpath(ckpts, file_name)):
            raise NoModelError("No trained {} found at {}: run `groundvqa train --stage {}` "
                               "first.".format(stage, fpath(ckpts, file_name), stage))
