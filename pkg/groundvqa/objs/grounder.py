"""Grounding stage: predict a box track for a prompt, and train the grounding network."""

import copy

import numpy as np
import torch

from groundvqa.core.errors import NoDataError, SamplingError, ConfigError, DataError
from groundvqa.core.io import save_json, load_json, save_checkpoint, load_checkpoint
from groundvqa.core.boxes import normalize_boxes
from groundvqa.core.prompts import build_prompt
from groundvqa.core.sampling import sample_frame_indices
from groundvqa.core.utils import to_builtin, progress_bar, check_config_hash
from groundvqa.data import (GrounderConfig, GrounderTrainConfig, EMAConfig, SamplingConfig,
                            SparseTubeletPrediction)
from groundvqa.nets.grounder import GroundingNet
from groundvqa.nets.losses import grounding_loss
from groundvqa.nets.text import TokenVocabulary
from groundvqa.nets.features import FRAME_REGION_BOX, frame_regions
from groundvqa.nets.utils import (seed_torch, set_deterministic, count_parameters,
                                  get_parameters, set_parameters)
from groundvqa.objs.ema import ema_init, ema_update, ema_extract
from groundvqa.sim.qa import answer_vocabulary

###################################################################################################
###################################################################################################

class GrounderState():
    """Grounding network together with its prompt vocabulary, settings and training history.

    Parameters
    ----------
    tokens : TokenVocabulary
        Prompt tokens the network embeds.
    config : GrounderConfig, optional
        Network dimensions.
    train_config : GrounderTrainConfig, optional
        Training settings. The seed also sets the initialization.
    sampling : SamplingConfig, optional
        Frame sampling settings.
    prompt_mode : {'answer', 'question'}, optional
        How prompts are built for this network.

    Attributes
    ----------
    history : list of float
        Mean loss of each completed training epoch.
    step : int
        Number of optimizer steps taken.
    """

    def __init__(self, tokens, config=GrounderConfig(), train_config=GrounderTrainConfig(),
                 sampling=SamplingConfig(), prompt_mode='answer'):
        """Initialize the state, with seeded random network parameters."""

        if config.d_model % config.n_heads:
            raise ConfigError("The model dimension ({}) must be divisible by the number of "
                              "heads ({}).".format(config.d_model, config.n_heads))
        if config.max_sampled_frames != sampling.max_sampled_frames:
            raise ConfigError("The grounder frame capacity ({}) must equal the sampling "
                              "maximum ({}).".format(config.max_sampled_frames,
                                                     sampling.max_sampled_frames))

        self.tokens = tokens
        self.config = config
        self.train_config = train_config
        self.sampling = sampling
        self.prompt_mode = prompt_mode

        seed_torch(train_config.seed)
        self.net = GroundingNet(len(tokens), config)
        self.net.eval()

        self.history = []
        self.step = 0


    @property
    def n_params(self):
        """Number of network parameters."""

        return count_parameters(self.net)


    def copy(self):
        """Return a copy of the state."""

        return copy.deepcopy(self)


    def get_parameters(self):
        """Get the network parameters as a flat vector."""

        return get_parameters(self.net)


    def load_parameters(self, params):
        """Load network parameters from a flat vector."""

        set_parameters(self.net, params)


    def with_parameters(self, params):
        """Get a copy of the state, with other network parameters loaded."""

        state = self.copy()
        state.load_parameters(params)

        return state


    def encode_prompt(self, prompt):
        """Encode a prompt into token ids and a padding mask."""

        return self.tokens.encode(prompt.text, self.config.max_tokens)


    def get_meta(self):
        """Get everything but the parameters, as a JSON-compatible dictionary."""

        return {'tokens' : self.tokens.tokens[2:],
                'config' : to_builtin(self.config),
                'train_config' : to_builtin(self.train_config),
                'sampling' : to_builtin(self.sampling),
                'prompt_mode' : self.prompt_mode,
                'history' : [float(loss) for loss in self.history],
                'step' : self.step}


    def save(self, ckpt_path, meta_path, config_hash, ema=None, ema_path=None):
        """Save the state.

        Parameters
        ----------
        ckpt_path : Path or str
            Checkpoint file for the trained parameters.
        meta_path : Path or str
            JSON file for the vocabulary, settings and history.
        config_hash : str
            Hash of the configuration to stamp the files with.
        ema : EMAState, optional
            Averaged parameters to save as well.
        ema_path : Path or str, optional
            Checkpoint file for the averaged parameters. Required if `ema` is given.
        """

        meta = self.get_meta()
        meta['config_hash'] = config_hash
        meta['ema'] = ema is not None

        save_checkpoint(ckpt_path, self.get_parameters(), config_hash, self.step, 'raw')
        if ema is not None:
            save_checkpoint(ema_path, ema_extract(ema), config_hash, ema.step, 'ema')
        save_json(meta, meta_path)


    @classmethod
    def load(cls, ckpt_path, meta_path, config_hash=None):
        """Load a state saved with `save`, with its trained parameters.

        Raises
        ------
        ConfigError
            If `config_hash` is given, and the saved files were produced with another one.
        """

        meta = load_json(meta_path)
        params = load_tagged_parameters(ckpt_path, 'raw', config_hash)
        check_config_hash(config_hash, meta.get('config_hash'), meta_path)

        state = cls(TokenVocabulary(meta['tokens']), GrounderConfig(**meta['config']),
                    GrounderTrainConfig(**meta['train_config']),
                    SamplingConfig(**meta['sampling']), meta['prompt_mode'])
        state.load_parameters(params)
        state.history = list(meta['history'])
        state.step = meta['step']

        return state


def load_tagged_parameters(path, tag, config_hash=None):
    """Load a parameter vector from a checkpoint, checking its tag and configuration hash.

    Raises
    ------
    DataError
        If the checkpoint holds parameters with another tag.
    ConfigError
        If `config_hash` is given, and the checkpoint was produced with another one.
    """

    params, header = load_checkpoint(path)
    if header['tag'] != tag:
        raise DataError("Checkpoint {} holds '{}' parameters, expected '{}'.".format(\
            path, header['tag'], tag))
    check_config_hash(config_hash, header['config_hash'], path)

    return params


def sample_targets(sample, indices, width=None, height=None):
    """Get the ground truth boxes of a sample on sampled frames.

    Parameters
    ----------
    sample : QASample
        Sample whose first ground truth track is the target.
    indices : list of int
        Sampled frames.
    width, height : float, optional
        Frame size to normalize by. Defaults to the size of the sample's video.

    Returns
    -------
    boxes : 2d array, shape: [n_sampled, 4]
        Normalized boxes, as (cx, cy, w, h). Rows of frames without a box are zero.
    visible : 1d array of bool, shape: [n_sampled]
        Whether the target has a box on each sampled frame.
    """

    width = sample.video.width if width is None else width
    height = sample.video.height if height is None else height

    track = sample.gt_tracks[0].boxes if sample.gt_tracks else {}
    visible = np.array([ind in track for ind in indices], dtype=bool)

    boxes = np.zeros((len(indices), 4))
    if visible.any():
        boxes[visible] = normalize_boxes([track[ind] for ind in indices if ind in track],
                                         width, height)

    return boxes, visible


def predict_tubelet(frames, prompt, state, indices=None):
    """Predict one box per sampled frame for the object a prompt refers to.

    Parameters
    ----------
    frames : 4d array, shape: [n_sampled, height, width, 3]
        Sampled RGB frames, with values in [0, 1].
    prompt : Prompt
        Grounding prompt.
    state : GrounderState
        Grounding model.
    indices : list of int, optional
        Video frames the sampled frames were taken from. Defaults to 0..n_sampled-1.

    Returns
    -------
    SparseTubeletPrediction
        Normalized boxes and confidences, aligned to `indices`.

    Raises
    ------
    SamplingError
        If there are no frames, more frames than the model can take,
        or a number of indices that does not match the frames.
    """

    n_frames = len(frames)
    indices = list(range(n_frames)) if indices is None else list(indices)

    if n_frames == 0:
        raise SamplingError("No sampled frames to ground, can not proceed.")
    if n_frames > state.config.max_sampled_frames:
        raise SamplingError("Got {} frames, but the grounder takes at most {}: resample the "
                            "video with `sample_frame_indices`.".format(\
                            n_frames, state.config.max_sampled_frames))
    if len(indices) != n_frames:
        raise SamplingError("Got {} frames for {} sampled indices.".format(\
            n_frames, len(indices)))

    ids, mask = state.encode_prompt(prompt)

    with torch.no_grad():
        boxes, conf = state.net(torch.as_tensor(np.asarray(frames), dtype=torch.float32)[None],
                                torch.as_tensor(ids)[None],
                                token_mask=torch.as_tensor(mask)[None])

    return SparseTubeletPrediction(boxes[0].double().numpy(), conf[0].double().numpy(), indices)


def prediction_loss(pred, gt_boxes, visible, gt_indices, config=GrounderTrainConfig()):
    """Compute the grounding loss of a prediction against ground truth.

    Parameters
    ----------
    pred : SparseTubeletPrediction
        Prediction on sampled frames.
    gt_boxes : 2d array, shape: [n_sampled, 4]
        Normalized ground truth boxes, as (cx, cy, w, h).
    visible : 1d array of bool, shape: [n_sampled]
        Whether the target is visible on each sampled frame.
    gt_indices : list of int
        Sampled frames the ground truth is given on.
    config : GrounderTrainConfig, optional
        Settings holding the loss weights.

    Returns
    -------
    total : float
        Weighted loss.
    terms : dict of {str : float}
        Unweighted 'l1', 'giou' and 'conf' terms.

    Raises
    ------
    SamplingError
        If the prediction and the ground truth are given on different frames.
    """

    if list(pred.indices) != list(gt_indices):
        raise SamplingError("Prediction and ground truth are on different sampled frames.")

    total, terms = grounding_loss(torch.as_tensor(np.asarray(pred.boxes, dtype=float)),
                                  torch.as_tensor(np.asarray(pred.confidences, dtype=float)),
                                  torch.as_tensor(np.asarray(gt_boxes, dtype=float)),
                                  torch.as_tensor(np.asarray(visible, dtype=bool)),
                                  lambda_l1=config.lambda_l1, lambda_giou=config.lambda_giou,
                                  lambda_conf=config.lambda_conf)

    return float(total), {label : float(term) for label, term in terms.items()}


def prompt_vocabulary(prompts):
    """Build the prompt token vocabulary, from training prompts and every corpus answer."""

    return TokenVocabulary.from_texts([prompt.text for prompt in prompts] + answer_vocabulary())


def collate(items, max_tokens):
    """Pad a list of prepared samples into batch tensors.

    Parameters
    ----------
    items : list of dict
        Prepared samples, with 'frames', 'regions', 'ids', 'boxes' and 'visible' entries.
    max_tokens : int
        Number of token positions.

    Returns
    -------
    dict of {str : Tensor}
        Padded 'frames', 'frame_mask', 'regions', 'ids', 'token_mask', 'boxes'
        and 'visible'. Regions are a tuple of descriptors, boxes and empty-slot mask.
    """

    n_frames = max(len(item['frames']) for item in items)
    height, width = items[0]['frames'].shape[1:3]
    n_slots, n_feats = items[0]['regions'][0].shape[1:]

    frames = np.zeros((len(items), n_frames, height, width, 3), dtype=np.float32)
    frame_mask = np.ones((len(items), n_frames), dtype=bool)
    boxes = np.zeros((len(items), n_frames, 4), dtype=np.float32)
    visible = np.zeros((len(items), n_frames), dtype=bool)
    ids = np.zeros((len(items), max_tokens), dtype=np.int64)

    # Padded frames hold only the whole-frame slot
    region_feats = np.zeros((len(items), n_frames, n_slots, n_feats), dtype=np.float32)
    region_feats[:, :, 0, -1] = 1.
    region_boxes = np.zeros((len(items), n_frames, n_slots, 4), dtype=np.float32)
    region_boxes[:, :, 0] = FRAME_REGION_BOX
    region_mask = np.ones((len(items), n_frames, n_slots), dtype=bool)
    region_mask[:, :, 0] = False

    for ind, item in enumerate(items):
        n_item = len(item['frames'])
        frames[ind, :n_item] = item['frames']
        frame_mask[ind, :n_item] = False
        boxes[ind, :n_item] = item['boxes']
        visible[ind, :n_item] = item['visible']
        ids[ind] = item['ids']
        region_feats[ind, :n_item], region_boxes[ind, :n_item], region_mask[ind, :n_item] = \
            item['regions']

    regions = tuple(torch.as_tensor(arr) for arr in (region_feats, region_boxes, region_mask))

    return {'frames' : torch.as_tensor(frames), 'frame_mask' : torch.as_tensor(frame_mask),
            'regions' : regions,
            'ids' : torch.as_tensor(ids), 'token_mask' : torch.as_tensor(ids == 0),
            'boxes' : torch.as_tensor(boxes), 'visible' : torch.as_tensor(visible)}


def train_grounder(samples, frames, config=GrounderTrainConfig(),
                   grounder_config=GrounderConfig(), ema_config=EMAConfig(),
                   sampling=SamplingConfig(), prompt_mode='answer',
                   progress=None, verbose=False):
    """Train the grounding network on oracle prompts.

    Parameters
    ----------
    samples : list of QASample
        Training samples, each with an answer and a ground truth track.
    frames : callable
        Frame source, called as `frames(video, indices)`.
    config : GrounderTrainConfig, optional
        Training settings.
    grounder_config : GrounderConfig, optional
        Network dimensions.
    ema_config : EMAConfig, optional
        Whether, and with which decay, to keep an average of the parameters.
    sampling : SamplingConfig, optional
        Frame sampling settings.
    prompt_mode : {'answer', 'question'}, optional
        Whether prompts append the answer to the question, or are the question alone.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use, over epochs.
    verbose : bool, optional, default: False
        Whether to print out status updates.

    Returns
    -------
    state : GrounderState
        Trained state, with the mean loss of each epoch in its history.
    ema : EMAState or None
        Average of the parameters, updated after every optimizer step, if enabled.

    Raises
    ------
    NoDataError
        If there are no training samples.
    PromptError
        If a sample has no answer, and prompts append answers.
    """

    if not samples:
        raise NoDataError("No training samples available, can not proceed.")

    set_deterministic()

    prompts = [build_prompt(sample.question, sample.answer, prompt_mode) for sample in samples]
    state = GrounderState(prompt_vocabulary(prompts), grounder_config, config,
                          sampling, prompt_mode)
    ema = ema_init(state.get_parameters(), ema_config.beta) if ema_config.enabled else None

    if config.epochs == 0:
        return state, ema

    if verbose:
        print("Training the grounder for {} epochs across {} samples.".format(\
            config.epochs, len(samples)))

    items = _prepare_items(samples, prompts, frames, state)

    params = [param for param in state.net.parameters()]
    optimizer = torch.optim.AdamW(params, lr=config.lr, weight_decay=config.weight_decay)
    rng = np.random.default_rng(config.seed)

    state.net.train()
    for epoch in progress_bar(range(config.epochs), progress, config.epochs,
                              'Training grounder'):

        order = rng.permutation(len(items))
        total = 0.
        for start in range(0, len(items), config.batch_size):

            batch = collate([items[ind] for ind in order[start:start + config.batch_size]],
                            grounder_config.max_tokens)
            pred_boxes, pred_conf = state.net(batch['frames'], batch['ids'],
                                              batch['frame_mask'], batch['token_mask'],
                                              batch['regions'])
            loss, _ = grounding_loss(pred_boxes, pred_conf, batch['boxes'], batch['visible'],
                                     batch['frame_mask'], config.lambda_l1,
                                     config.lambda_giou, config.lambda_conf)

            optimizer.zero_grad()
            loss.backward()
            if config.clip_norm:
                torch.nn.utils.clip_grad_norm_(params, config.clip_norm)
            optimizer.step()
            state.step += 1

            if ema is not None:
                ema = ema_update(ema, state.get_parameters(), ema_config.warmup)
                assert ema.step == state.step, "EMA fell out of step with the optimizer."

            total += loss.item() * len(batch['frames'])

        state.history.append(total / len(items))
        if verbose:
            print("  epoch {:3d}: loss {:.4f}".format(epoch + 1, state.history[-1]))

    state.net.eval()

    return state, ema


def _prepare_items(samples, prompts, frames, state):
    """Load sampled frames, their regions and the targets of each training sample."""

    cache, regions = {}, {}
    items = []
    for sample, prompt in zip(samples, prompts):

        video = sample.video
        indices = sample_frame_indices(video.num_frames, video.native_fps, state.sampling)
        if video.video_id not in cache:
            cache[video.video_id] = np.asarray(frames(video, indices), dtype=np.float32)
            regions[video.video_id] = frame_regions(cache[video.video_id],
                                                    state.config.max_regions)

        boxes, visible = sample_targets(sample, indices)
        ids, _ = state.encode_prompt(prompt)
        items.append({'frames' : cache[video.video_id], 'regions' : regions[video.video_id],
                      'ids' : ids, 'boxes' : boxes, 'visible' : visible})

    return items

