"""Data objects.

Notes on data objects:
- these data objects are NamedTuples, immutable data types with attribute labels
- the namedtuples are wrapped as classes (they are still immutable when doing this)
- wrapping in objects helps to be able to render well formed documentation for them.
- setting `__slots__` as empty voids the dynamic dictionary that usually stores attributes
    - this means no additional attributes can be defined (which is more memory efficient)
"""

from collections import namedtuple

###################################################################################################
###################################################################################################

## Boxes, tracks & videos

class BoundingBox(namedtuple('BoundingBox', ['x1', 'y1', 'x2', 'y2'])):
    """An axis-aligned box, in corner convention.

    Parameters
    ----------
    x1, y1 : float
        Top-left corner of the box.
    x2, y2 : float
        Bottom-right corner of the box.

    Notes
    -----
    Coordinates are in pixels, or in [0, 1] if the box is normalized.
    Construction does not validate the geometry: see `check_box` and `validate_tubelet`.
    """
    __slots__ = ()

    @property
    def width(self):
        """Width of the box."""
        return self.x2 - self.x1

    @property
    def height(self):
        """Height of the box."""
        return self.y2 - self.y1

    @property
    def area(self):
        """Area of the box."""
        return self.width * self.height


class Tubelet(namedtuple('Tubelet', ['object_id', 'boxes', 'confidence'], defaults=(None,))):
    """A track of boxes for one object.

    Parameters
    ----------
    object_id : str
        Identifier of the tracked object.
    boxes : dict of {int : BoundingBox}
        Boxes, keyed by 0-based frame index on the native frame timeline.
    confidence : float, optional
        Track confidence. Only set for predicted tracks.

    Notes
    -----
    This object is a data object, based on a NamedTuple, with immutable data attributes.
    """
    __slots__ = ()

    @property
    def frames(self):
        """Sorted frame indices that carry a box."""
        return sorted(self.boxes)


class VideoMeta(namedtuple('VideoMeta', ['video_id', 'num_frames', 'native_fps',
                                         'width', 'height'])):
    """Meta data of a video.

    Parameters
    ----------
    video_id : str
        Identifier of the video.
    num_frames : int
        Number of frames in the video.
    native_fps : float
        Frame rate of the video, in frames per second.
    width, height : int
        Frame size, in pixels.
    """
    __slots__ = ()


class SamplingConfig(namedtuple('SamplingConfig', ['target_fps', 'max_sampled_frames',
                                                   'duplication_factor'],
                                defaults=(5.0, 200, None))):
    """Settings for temporal sampling of frames, and expansion of sparse predictions.

    Parameters
    ----------
    target_fps : float, optional, default: 5
        Rate at which frames are sampled, in frames per second.
    max_sampled_frames : int, optional, default: 200
        Maximum number of sampled frames that the grounding model can process.
    duplication_factor : int or None, optional, default: None
        Number of frames each sampled prediction is copied onto.
        If None, it is derived from the sampling stride: round(native_fps / target_fps).
    """
    __slots__ = ()


class QASample(namedtuple('QASample', ['video', 'question', 'answer', 'gt_tracks'])):
    """A question about a video, with its answer and ground truth track(s).

    Parameters
    ----------
    video : VideoMeta
        The video the question is about.
    question : str
        The question.
    answer : str or None
        The answer. None for splits that do not provide answers.
    gt_tracks : list of Tubelet
        Ground truth track(s) of the referred object(s).
    """
    __slots__ = ()

    @property
    def key(self):
        """Key that identifies the sample, as (video_id, question)."""
        return (self.video.video_id, self.question)


class Violation(namedtuple('Violation', ['frame', 'kind', 'message'])):
    """A problem found when validating a tubelet.

    Parameters
    ----------
    frame : int
        Frame at which the violation occurs.
    kind : {'frame_range', 'degenerate', 'out_of_bounds', 'non_finite'}
        The kind of violation.
    message : str
        Description of the violation.
    """
    __slots__ = ()

## Synthetic corpus

class SceneObject(namedtuple('SceneObject', ['shape', 'color', 'appearance_frame',
                                             'start', 'velocity', 'size'])):
    """An object moving through a synthetic scene.

    Parameters
    ----------
    shape : {'square', 'circle', 'triangle'}
        Shape of the object.
    color : {'red', 'green', 'blue', 'yellow'}
        Color of the object.
    appearance_frame : int
        First frame in which the object is visible.
    start : tuple of (float, float)
        Center position (x, y) at the appearance frame, in pixels.
    velocity : tuple of (float, float)
        Velocity (vx, vy) of the center, in pixels per frame.
    size : float
        Side length of the object's bounding square, in pixels.
    """
    __slots__ = ()


class SceneSpec(namedtuple('SceneSpec', ['seed', 'num_frames', 'width', 'height',
                                         'fps', 'objects'])):
    """Definition of a synthetic scene.

    Parameters
    ----------
    seed : int
        Seed the scene was generated from.
    num_frames : int
        Number of frames in the scene.
    width, height : int
        Canvas size, in pixels.
    fps : float
        Native frame rate of the scene.
    objects : tuple of SceneObject
        Objects in the scene, in painter order.
    """
    __slots__ = ()


class SceneParams(namedtuple('SceneParams', ['width', 'height', 'fps', 'min_frames',
                                             'max_frames', 'min_objects', 'max_objects',
                                             'min_size', 'max_size', 'max_speed',
                                             'repeat_prob', 'appearance_span', 'min_gap',
                                             'max_instances'],
                             defaults=(64, 64, 30.0, 30, 60, 1, 3, 10.0, 16.0, 0.25, 0.5,
                                       0.125, 6, 2))):
    """Settings for generating synthetic scenes.

    Parameters
    ----------
    width, height : int, optional, default: 64
        Canvas size, in pixels.
    fps : float, optional, default: 30
        Native frame rate.
    min_frames, max_frames : int, optional, default: 30, 60
        Range of the number of frames, inclusive.
    min_objects, max_objects : int, optional, default: 1, 3
        Range of the number of objects, inclusive. At most 6 objects are supported.
    min_size, max_size : float, optional, default: 10, 16
        Range of object sizes, in pixels.
    max_speed : float, optional, default: 0.25
        Maximum speed, per axis, in pixels per frame.
    repeat_prob : float, optional, default: 0.5
        Probability that an object re-uses the (color, shape) class of an earlier object.
    appearance_span : float, optional, default: 0.125
        Fraction of the scene, from its start, over which objects of a new class appear.
    min_gap : int, optional, default: 6
        Minimum number of frames between the appearances of two objects of the same class.
    max_instances : int, optional, default: 2
        Maximum number of objects of any one class.

    Notes
    -----
    The default gap equals the sampling stride of 30 fps video sampled at 5 fps, so
    objects of the same class first show up on different sampled frames.
    """
    __slots__ = ()


class DatasetSplitSpec(namedtuple('DatasetSplitSpec', ['name', 'num_samples', 'seed'])):
    """Definition of a dataset split.

    Parameters
    ----------
    name : {'train', 'val', 'test'}
        Name of the split.
    num_samples : int
        Number of question samples in the split.
    seed : int
        Seed of the split. Seeds must differ across splits.
    """
    __slots__ = ()

## Stage 1

class AnswerResult(namedtuple('AnswerResult', ['answer', 'confidence', 'source'])):
    """An answer to a question.

    Parameters
    ----------
    answer : str
        The answer text.
    confidence : float
        Confidence of the answer, in [0, 1].
    source : {'model', 'oracle', 'external'}
        Where the answer came from.
    """
    __slots__ = ()


class VQANetConfig(namedtuple('VQANetConfig', ['hidden_dim', 'max_tokens'],
                              defaults=(32, 32))):
    """Architecture settings for the answering network.

    Parameters
    ----------
    hidden_dim : int, optional, default: 32
        Size of the video projection, question embedding and fusion layers.
    max_tokens : int, optional, default: 32
        Maximum number of question tokens used.
    """
    __slots__ = ()


class VQATrainConfig(namedtuple('VQATrainConfig', ['epochs', 'lr', 'seed', 'batch_size'],
                                defaults=(20, 1e-3, 0, 16))):
    """Training settings for the answering network.

    Parameters
    ----------
    epochs : int, optional, default: 20
        Number of passes over the training samples.
    lr : float, optional, default: 1e-3
        Learning rate of the Adam optimizer.
    seed : int, optional, default: 0
        Seed for initialization and sample ordering.
    batch_size : int, optional, default: 16
        Number of samples per optimizer step.
    """
    __slots__ = ()

## Prompts

class Prompt(namedtuple('Prompt', ['text', 'question', 'answer', 'answer_source'])):
    """Textual input to the grounding stage.

    Parameters
    ----------
    text : str
        The prompt text.
    question : str
        The question the prompt was composed from.
    answer : str or None
        The answer the prompt was composed from. None for question-only prompts.
    answer_source : {'model', 'oracle', 'external', 'none'}
        Where the answer came from.
    """
    __slots__ = ()

## Stage 2

class GrounderConfig(namedtuple('GrounderConfig', ['visual_channels', 'text_dim', 'd_model',
                                                   'n_heads', 'n_enc_layers', 'n_dec_layers',
                                                   'max_sampled_frames', 'max_tokens',
                                                   'frame_size', 'max_regions'],
                                defaults=(16, 32, 32, 4, 2, 2, 200, 32, 64, 8))):
    """Architecture settings for the grounding network.

    Parameters
    ----------
    visual_channels : int, optional, default: 16
        Channels of the first convolution block of the visual encoder.
    text_dim : int, optional, default: 32
        Size of the prompt token embeddings.
    d_model : int, optional, default: 32
        Shared model dimension. Must be divisible by `n_heads`.
    n_heads : int, optional, default: 4
        Number of attention heads.
    n_enc_layers, n_dec_layers : int, optional, default: 2
        Number of joint encoder and decoder layers.
    max_sampled_frames : int, optional, default: 200
        Maximum number of sampled frames. Must match `SamplingConfig.max_sampled_frames`.
    max_tokens : int, optional, default: 32
        Maximum number of prompt tokens used.
    frame_size : int, optional, default: 64
        Side length frames are resized to before encoding.
    max_regions : int, optional, default: 8
        Maximum number of colored regions the box pointer chooses from, per frame.
    """
    __slots__ = ()


class GrounderTrainConfig(namedtuple('GrounderTrainConfig',
                                     ['epochs', 'lr', 'seed', 'batch_size', 'weight_decay',
                                      'lambda_l1', 'lambda_giou', 'lambda_conf', 'clip_norm'],
                                     defaults=(20, 1e-3, 0, 8, 1e-4, 5.0, 2.0, 1.0, 1.0))):
    """Training settings for the grounding network.

    Parameters
    ----------
    epochs : int, optional, default: 20
        Number of passes over the training samples.
    lr : float, optional, default: 1e-3
        Learning rate of the AdamW optimizer.
    seed : int, optional, default: 0
        Seed for initialization and sample ordering.
    batch_size : int, optional, default: 8
        Number of samples per optimizer step.
    weight_decay : float, optional, default: 1e-4
        Weight decay of the optimizer.
    lambda_l1, lambda_giou, lambda_conf : float, optional, default: 5, 2, 1
        Weights of the L1, generalized IoU and visibility terms of the loss.
    clip_norm : float or None, optional, default: 1.0
        Maximum gradient norm. If None, gradients are not clipped.
    """
    __slots__ = ()


class SparseTubeletPrediction(namedtuple('SparseTubeletPrediction',
                                         ['boxes', 'confidences', 'indices'])):
    """Per-sampled-frame output of the grounding network.

    Parameters
    ----------
    boxes : 2d array, shape: [n_sampled, 4]
        Normalized boxes, as (cx, cy, w, h), in [0, 1].
    confidences : 1d array, shape: [n_sampled]
        Per-frame confidence that the object is visible, in [0, 1].
    indices : list of int
        Sampled frame indices that the rows align to.
    """
    __slots__ = ()

## EMA

class EMAConfig(namedtuple('EMAConfig', ['enabled', 'beta', 'warmup'],
                           defaults=(True, 0.999, True))):
    """Settings for averaging model parameters.

    Parameters
    ----------
    enabled : bool, optional, default: True
        Whether to keep an averaged copy of the parameters during training.
    beta : float, optional, default: 0.999
        Decay factor of the average.
    warmup : bool, optional, default: True
        Whether the decay ramps up to `beta` over the first updates, as (1 + t) / (10 + t).
    """
    __slots__ = ()


class EMAState(namedtuple('EMAState', ['params', 'beta', 'step'])):
    """Exponential moving average of a parameter vector.

    Parameters
    ----------
    params : 1d array
        Averaged parameter vector.
    beta : float
        Decay factor, in [0, 1].
    step : int
        Number of updates applied.
    """
    __slots__ = ()

## External service

class ExternalEndpoint(namedtuple('ExternalEndpoint', ['url', 'timeout'], defaults=(10.0,))):
    """Description of an external answering service.

    Parameters
    ----------
    url : str
        URL that accepts a JSON POST of {"video_id", "question"}.
    timeout : float, optional, default: 10
        Timeout for the request, in seconds.
    """
    __slots__ = ()

## Evaluation

class Prediction(namedtuple('Prediction', ['video_id', 'question', 'answer', 'tracks'])):
    """Predicted tracks for one question.

    Parameters
    ----------
    video_id : str
        Identifier of the video.
    question : str
        The question.
    answer : str or None
        The answer used to build the grounding prompt, if any.
    tracks : list of Tubelet
        Predicted track(s), with confidences.
    """
    __slots__ = ()


class TrackSet(namedtuple('TrackSet', ['tracks', 'role'])):
    """A collection of tracks to evaluate.

    Parameters
    ----------
    tracks : dict of {str : list of Tubelet}
        Tracks, keyed by sequence identifier.
    role : {'prediction', 'ground_truth'}
        Role of the tracks.
    """
    __slots__ = ()


class HOTAReport(namedtuple('HOTAReport', ['alphas', 'tp', 'fn', 'fp', 'det_a', 'ass_a',
                                           'det_re', 'det_pr', 'ass_re', 'ass_pr',
                                           'hota_alpha', 'hota', 'per_sequence', 'flagged'])):
    """Results of a HOTA evaluation.

    Parameters
    ----------
    alphas : 1d array
        IoU thresholds.
    tp, fn, fp : 1d array of int
        True positive, false negative and false positive counts, per threshold.
    det_a, ass_a : 1d array
        Detection and association accuracy, per threshold.
    det_re, det_pr, ass_re, ass_pr : 1d array
        Detection and association recall & precision, per threshold.
    hota_alpha : 1d array
        HOTA per threshold, as sqrt(det_a * ass_a).
    hota : float
        Final HOTA, as the mean of `hota_alpha`.
    per_sequence : dict of {str : dict}
        Per sequence summary, with keys 'HOTA', 'DetA' and 'AssA'.
    flagged : list of str
        Sequences that were present in only one of the track sets.
    """
    __slots__ = ()

## Run configuration

class PathConfig(namedtuple('PathConfig', ['data', 'checkpoints', 'reports'],
                            defaults=('data', 'checkpoints', 'reports'))):
    """Locations of the artifacts of a run.

    Parameters
    ----------
    data : str, optional, default: 'data'
        Directory of the generated dataset.
    checkpoints : str, optional, default: 'checkpoints'
        Directory of trained model states.
    reports : str, optional, default: 'reports'
        Directory of predictions and evaluation reports.
    """
    __slots__ = ()


class RunConfig(namedtuple('RunConfig', ['paths', 'sampling', 'scene', 'splits', 'vqa',
                                         'vqa_net', 'grounder', 'grounder_train', 'ema',
                                         'answers', 'prompt_mode', 'external', 'seed',
                                         'n_jobs'])):
    """Settings of a full run of the pipeline.

    Parameters
    ----------
    paths : PathConfig
        Artifact locations.
    sampling : SamplingConfig
        Frame sampling settings.
    scene : SceneParams
        Synthetic scene settings.
    splits : tuple of DatasetSplitSpec
        Dataset splits to generate.
    vqa : VQATrainConfig
        Answering model training settings.
    vqa_net : VQANetConfig
        Answering model dimensions.
    grounder : GrounderConfig
        Grounding model dimensions.
    grounder_train : GrounderTrainConfig
        Grounding model training settings.
    ema : EMAConfig
        Parameter averaging settings.
    answers : {'model', 'oracle', 'external'}
        Where answers come from at inference.
    prompt_mode : {'answer', 'question'}
        Whether grounding prompts append answers to questions.
    external : ExternalEndpoint or None
        Answering service, if any.
    seed : int
        Global seed of the run.
    n_jobs : int
        Number of parallel jobs for dataset generation.
    """
    __slots__ = ()
