"""Answering stage: a small classifier over a closed answer vocabulary, and oracle answers."""

import numpy as np
import torch
import torch.nn.functional as F

from groundvqa.core.errors import NoDataError, VocabularyError, AnswersUnavailableError
from groundvqa.core.io import save_json, load_json, save_checkpoint, load_checkpoint
from groundvqa.core.sampling import sample_frame_indices
from groundvqa.core.utils import to_builtin, progress_bar, check_config_hash
from groundvqa.data import AnswerResult, VQANetConfig, VQATrainConfig, SamplingConfig
from groundvqa.nets.text import TokenVocabulary, AnswerVocabulary
from groundvqa.nets.features import video_features
from groundvqa.nets.vqa import VQANet
from groundvqa.nets.utils import (seed_torch, set_deterministic, count_parameters,
                                  get_parameters, set_parameters)
from groundvqa.sim.qa import answer_vocabulary

###################################################################################################
###################################################################################################

class VQAModelState():
    """Answering network together with its vocabularies, settings and training history.

    Parameters
    ----------
    answers : AnswerVocabulary
        Closed set of answers the network chooses between.
    tokens : TokenVocabulary
        Question and answer tokens the network embeds.
    net_config : VQANetConfig, optional
        Network dimensions.
    train_config : VQATrainConfig, optional
        Training settings. The seed also sets the initialization.
    sampling : SamplingConfig, optional
        Frame sampling used to compute video features.

    Attributes
    ----------
    history : list of float
        Mean cross-entropy loss of each completed training epoch.
    step : int
        Number of optimizer steps taken.
    """

    def __init__(self, answers, tokens, net_config=VQANetConfig(),
                 train_config=VQATrainConfig(), sampling=SamplingConfig()):
        """Initialize the state, with seeded random network parameters."""

        self.answers = answers
        self.tokens = tokens
        self.net_config = net_config
        self.train_config = train_config
        self.sampling = sampling

        seed_torch(train_config.seed)
        self.net = VQANet(len(tokens), self.encode_answers(), net_config)
        self.net.eval()

        self.history = []
        self.step = 0


    @property
    def n_params(self):
        """Number of network parameters."""

        return count_parameters(self.net)


    def get_parameters(self):
        """Get the network parameters as a flat vector."""

        return get_parameters(self.net)


    def load_parameters(self, params):
        """Load network parameters from a flat vector."""

        set_parameters(self.net, params)


    def encode_question(self, question):
        """Encode a question into token ids and a padding mask."""

        return self.tokens.encode(question, self.net_config.max_tokens)


    def encode_answers(self):
        """Encode every answer into token ids, padded to the question length.

        Returns
        -------
        2d array of int, shape: [n_answers, max_tokens]
        """

        return np.stack([self.tokens.encode(answer, self.net_config.max_tokens)[0] \
            for answer in self.answers.answers])


    def get_meta(self):
        """Get everything but the parameters, as a JSON-compatible dictionary."""

        return {'answers' : self.answers.answers,
                'tokens' : self.tokens.tokens[2:],
                'net_config' : to_builtin(self.net_config),
                'train_config' : to_builtin(self.train_config),
                'sampling' : to_builtin(self.sampling),
                'history' : [float(loss) for loss in self.history],
                'step' : self.step}


    def save(self, ckpt_path, meta_path, config_hash):
        """Save the parameters to a checkpoint file, and the rest to a JSON file."""

        meta = self.get_meta()
        meta['config_hash'] = config_hash
        save_checkpoint(ckpt_path, self.get_parameters(), config_hash, self.step, 'raw')
        save_json(meta, meta_path)


    @classmethod
    def load(cls, ckpt_path, meta_path, config_hash=None):
        """Load a state saved with `save`.

        Raises
        ------
        ConfigError
            If `config_hash` is given, and the saved files were produced with another one.
        """

        meta = load_json(meta_path)
        params, header = load_checkpoint(ckpt_path)
        check_config_hash(config_hash, meta.get('config_hash'), meta_path)
        check_config_hash(config_hash, header['config_hash'], ckpt_path)

        state = cls(AnswerVocabulary(meta['answers']), TokenVocabulary(meta['tokens']),
                    VQANetConfig(**meta['net_config']), VQATrainConfig(**meta['train_config']),
                    SamplingConfig(**meta['sampling']))
        state.load_parameters(params)
        state.history = list(meta['history'])
        state.step = meta['step']

        return state


def compute_video_features(frames, video, sampling=SamplingConfig()):
    """Compute answering features for a video, from its sampled frames.

    Parameters
    ----------
    frames : callable
        Frame source, called as `frames(video, indices)`.
    video : VideoMeta
        Video to compute features for.
    sampling : SamplingConfig, optional
        Frame sampling settings.

    Returns
    -------
    1d array
        Video features.
    """

    indices = sample_frame_indices(video.num_frames, video.native_fps, sampling)

    return video_features(frames(video, indices))


def train_vqa(samples, frames, config=VQATrainConfig(), net_config=VQANetConfig(),
              answers=None, sampling=SamplingConfig(), progress=None, verbose=False):
    """Train the answering network.

    Parameters
    ----------
    samples : list of QASample
        Training samples. Every sample needs an answer within the vocabulary.
    frames : callable
        Frame source, called as `frames(video, indices)`.
    config : VQATrainConfig, optional
        Training settings.
    net_config : VQANetConfig, optional
        Network dimensions.
    answers : list of str, optional
        Answer vocabulary. Defaults to every answer of the synthetic corpus.
    sampling : SamplingConfig, optional
        Frame sampling used to compute video features.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use, over epochs.
    verbose : bool, optional, default: False
        Whether to print out status updates.

    Returns
    -------
    VQAModelState
        Trained state, with the mean loss of each epoch in its history.

    Raises
    ------
    VocabularyError
        If any sample has no answer, or an answer outside the vocabulary.

    Notes
    -----
    Training uses Adam over batches in a seeded order, with deterministic torch kernels.
    The token vocabulary holds the question and the answer tokens.
    """

    answers = AnswerVocabulary(answer_vocabulary() if answers is None else answers)

    offenders = sorted({str(sample.answer) for sample in samples if sample.answer not in answers})
    if offenders:
        raise VocabularyError("Training answers are outside the answer vocabulary: "
                              "{}.".format(', '.join(offenders)))

    texts = [sample.question for sample in samples] + answers.answers
    tokens = TokenVocabulary.from_texts(texts)
    state = VQAModelState(answers, tokens, net_config, config, sampling)

    if config.epochs == 0 or not samples:
        return state

    set_deterministic()

    if verbose:
        print("Training the answering model for {} epochs across {} samples.".format(\
            config.epochs, len(samples)))

    feats = torch.as_tensor(np.stack([compute_video_features(frames, sample.video, sampling) \
        for sample in samples]))
    encoded = [state.encode_question(sample.question) for sample in samples]
    token_ids = torch.as_tensor(np.stack([ids for ids, _ in encoded]))
    token_mask = torch.as_tensor(np.stack([mask for _, mask in encoded]))
    targets = torch.as_tensor([answers.to_index(sample.answer) for sample in samples])

    optimizer = torch.optim.Adam(state.net.parameters(), lr=config.lr)
    rng = np.random.default_rng(config.seed)

    state.net.train()
    for epoch in progress_bar(range(config.epochs), progress, config.epochs, 'Training VQA'):

        order = rng.permutation(len(samples))
        total = 0.
        for start in range(0, len(samples), config.batch_size):

            batch = torch.as_tensor(order[start:start + config.batch_size])
            logits = state.net(feats[batch], token_ids[batch], token_mask[batch])
            loss = F.cross_entropy(logits, targets[batch])

            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

            state.step += 1
            total += loss.item() * len(batch)

        state.history.append(total / len(samples))
        if verbose:
            print("  epoch {:3d}: loss {:.4f}".format(epoch + 1, state.history[-1]))

    state.net.eval()

    return state


def predict_answer(frames, question, state):
    """Answer a question about a video.

    Parameters
    ----------
    frames : 4d array, shape: [n_frames, height, width, 3]
        Sampled RGB frames of the video, with values in [0, 1].
    question : str
        Question to answer.
    state : VQAModelState
        Answering model.

    Returns
    -------
    AnswerResult
        Answer with the highest probability, with that probability as confidence.

    Raises
    ------
    NoDataError
        If no frames are given.
    """

    if len(frames) == 0:
        raise NoDataError("No frames available to answer from, can not proceed.")

    probs = answer_probabilities(frames, question, state)
    ind = int(np.argmax(probs))

    return AnswerResult(state.answers.to_answer(ind), float(probs[ind]), 'model')


def answer_probabilities(frames, question, state):
    """Get the probability of every answer in the vocabulary.

    Returns
    -------
    1d array
        Probabilities, in vocabulary order.
    """

    ids, mask = state.encode_question(question)

    with torch.no_grad():
        logits = state.net(torch.as_tensor(video_features(frames))[None],
                           torch.as_tensor(ids)[None], torch.as_tensor(mask)[None])

    return torch.softmax(logits.double(), dim=-1)[0].numpy()


def oracle_answer(sample):
    """Get the ground truth answer of a sample.

    Parameters
    ----------
    sample : QASample
        Sample to answer.

    Returns
    -------
    AnswerResult
        The annotated answer, with a confidence of 1.

    Raises
    ------
    AnswersUnavailableError
        If the sample has no annotated answer.
    """

    if sample.answer is None:
        raise AnswersUnavailableError("Answers unavailable: sample '{}' of video '{}' has "
                                      "no annotated answer.".format(sample.question,
                                                                    sample.video.video_id))

    return AnswerResult(sample.answer, 1.0, 'oracle')

