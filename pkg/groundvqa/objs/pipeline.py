"""Two-stage pipeline: answer a question, then ground the answer in the video."""

from contextlib import contextmanager

import numpy as np

from groundvqa.core.errors import NoModelError, StageError
from groundvqa.core.boxes import denormalize_box
from groundvqa.core.prompts import build_prompt
from groundvqa.core.sampling import sample_frame_indices, expand_predictions
from groundvqa.core.utils import progress_bar
from groundvqa.data import (Tubelet, Prediction, SamplingConfig, VQATrainConfig, VQANetConfig,
                            GrounderConfig, GrounderTrainConfig, EMAConfig)
from groundvqa.analysis.hota import ALPHAS, compute_hota, build_track_sets
from groundvqa.objs.vqa import train_vqa, predict_answer, oracle_answer
from groundvqa.objs.grounder import train_grounder, predict_tubelet
from groundvqa.objs.external import external_answer
from groundvqa.objs.ema import ema_extract

###################################################################################################
###################################################################################################

ANSWER_SOURCES = ('model', 'oracle', 'external')

###################################################################################################
###################################################################################################

def get_answer(sample, frames, answers='model', vqa=None, endpoint=None):
    """Answer the question of a sample.

    Parameters
    ----------
    sample : QASample
        Sample whose question to answer.
    frames : callable
        Frame source, called as `frames(video, indices)`.
    answers : {'model', 'oracle', 'external'}
        Where to get the answer from.
    vqa : VQAModelState, optional
        Answering model. Required if `answers` is 'model'.
    endpoint : ExternalEndpoint, optional
        Answering service. Required if `answers` is 'external'.

    Returns
    -------
    AnswerResult
        The answer.
    """

    if answers not in ANSWER_SOURCES:
        raise ValueError("Answer source {} not understood.".format(answers))

    video = sample.video

    if answers == 'oracle':
        return oracle_answer(sample)

    if answers == 'external':
        if endpoint is None:
            raise NoModelError("No answering service endpoint is configured, "
                               "can not proceed.")
        return external_answer(endpoint, video.video_id, sample.question)

    if vqa is None:
        raise NoModelError("No answering model is available, can not proceed.")
    indices = sample_frame_indices(video.num_frames, video.native_fps, vqa.sampling)

    return predict_answer(frames(video, indices), sample.question, vqa)


def infer_full(sample, frames, grounder, answers='model', vqa=None, endpoint=None,
               prompt_mode='answer', object_id='pred0'):
    """Run both stages of the pipeline on one question about a video.

    Parameters
    ----------
    sample : QASample
        Sample with the video and question. Annotated answers are only used
        if `answers` is 'oracle'.
    frames : callable
        Frame source, called as `frames(video, indices)`.
    grounder : GrounderState
        Grounding model. Its sampling settings set which frames are grounded.
    answers : {'model', 'oracle', 'external'}
        Where to get the answer from.
    vqa : VQAModelState, optional
        Answering model. Required if `answers` is 'model'.
    endpoint : ExternalEndpoint, optional
        Answering service. Required if `answers` is 'external'.
    prompt_mode : {'answer', 'question'}
        Whether to append the answer to the question, or to ground the question alone,
        in which case no answer is requested.
    object_id : str, optional
        Identifier to give the predicted track.

    Returns
    -------
    Prediction
        Prediction with one track, with a box on every frame of the video.

    Raises
    ------
    StageError
        If any stage fails, naming the stage, and chained to the original error.
    """

    video = sample.video

    with _stage('vqa'):
        answer = None if prompt_mode == 'question' else \
            get_answer(sample, frames, answers, vqa, endpoint)

    with _stage('prompt'):
        prompt = build_prompt(sample.question, None if answer is None else answer.answer,
                              prompt_mode, 'oracle' if answer is None else answer.source)

    with _stage('sampling'):
        indices = sample_frame_indices(video.num_frames, video.native_fps, grounder.sampling)
        sampled = frames(video, indices)

    with _stage('grounding'):
        sparse = predict_tubelet(sampled, prompt, grounder, indices)

    with _stage('expansion'):
        boxes = {ind : denormalize_box(box, video.width, video.height) \
            for ind, box in zip(sparse.indices, sparse.boxes)}
        track = Tubelet(object_id, boxes, float(np.mean(sparse.confidences)))
        dense = expand_predictions(track, video.num_frames, video.native_fps,
                                   grounder.sampling)

    return Prediction(video.video_id, sample.question, prompt.answer, [dense])


def predict_split(samples, frames, grounder, answers='model', vqa=None, endpoint=None,
                  prompt_mode='answer', progress=None, verbose=False):
    """Run the pipeline on every sample of a split.

    Parameters
    ----------
    samples : list of QASample
        Samples to predict.
    frames : callable
        Frame source, called as `frames(video, indices)`.
    grounder : GrounderState
        Grounding model.
    answers, vqa, endpoint, prompt_mode
        Answer settings, as in `infer_full`.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use.
    verbose : bool, optional, default: False
        Whether to print out status updates.

    Returns
    -------
    list of Prediction
        Predictions, in sample order.
    """

    if verbose:
        print("Running the pipeline on {} samples, with {} answers.".format(\
            len(samples), answers if prompt_mode == 'answer' else 'no'))

    return [infer_full(sample, frames, grounder, answers, vqa, endpoint, prompt_mode) \
        for sample in progress_bar(samples, progress, len(samples), 'Predicting')]


def evaluate_predictions(samples, predictions, alphas=ALPHAS):
    """Compute HOTA of predictions against annotated samples."""

    pred, gt = build_track_sets(samples, predictions)

    return compute_hota(pred, gt, alphas)


def run_ablation(train_samples, eval_samples, train_frames, eval_frames,
                 train_config=GrounderTrainConfig(), grounder_config=GrounderConfig(),
                 ema_config=EMAConfig(), vqa_config=VQATrainConfig(),
                 vqa_net_config=VQANetConfig(), sampling=SamplingConfig(),
                 use_ema=True, progress=None, verbose=True):
    """Compare grounding with oracle answers, model answers and no answers.

    Parameters
    ----------
    train_samples, eval_samples : list of QASample
        Samples to train on, and to evaluate on. Evaluation samples need answers.
    train_frames, eval_frames : callable
        Frame sources for the training and evaluation samples.
    train_config, grounder_config, ema_config : optional
        Grounder training, architecture and averaging settings.
    vqa_config, vqa_net_config : optional
        Answering model training and architecture settings.
    sampling : SamplingConfig, optional
        Frame sampling settings.
    use_ema : bool, optional, default: True
        Whether to evaluate with averaged parameters, when available.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use.
    verbose : bool, optional, default: True
        Whether to print out status updates and the comparison.

    Returns
    -------
    dict of {str : float}
        Final HOTA with 'oracle' answers, 'model' answers and 'question' only prompts.

    Notes
    -----
    One grounder is trained on prompts with answers, and is evaluated with oracle and
    with model answers. A second grounder is trained and evaluated on questions alone.
    Whether appending answers beats questions alone is reported, not enforced.
    """

    vqa = train_vqa(train_samples, train_frames, vqa_config, vqa_net_config,
                    sampling=sampling, verbose=verbose)

    results = {}
    for prompt_mode, sources in [('answer', ('oracle', 'model')), ('question', (None,))]:

        grounder, ema = train_grounder(train_samples, train_frames, train_config,
                                       grounder_config, ema_config, sampling, prompt_mode,
                                       progress=progress, verbose=verbose)
        if use_ema and ema is not None:
            grounder = grounder.with_parameters(ema_extract(ema))

        for source in sources:
            predictions = predict_split(eval_samples, eval_frames, grounder,
                                        source or 'oracle', vqa, None, prompt_mode,
                                        progress=progress)
            label = source or 'question'
            results[label] = evaluate_predictions(eval_samples, predictions).hota

    if verbose:
        for label in ('oracle', 'model', 'question'):
            print("HOTA with {:8s} prompts: {:.4f}".format(label, results[label]))
        print("Appending answers {} grounding from questions alone.".format(\
            'improves on' if results['oracle'] >= results['question'] else 'does not improve on'))

    return results


@contextmanager
def _stage(stage):
    """Wrap errors raised within a pipeline stage into a stage error."""

    try:
        yield
    except StageError:
        raise
    except Exception as excp:
        raise StageError(stage, '{}: {}'.format(type(excp).__name__, excp)) from excp
