"""Tests for groundvqa.objs.vqa."""

import numpy as np
import torch
from pytest import raises

from groundvqa.core.errors import (NoDataError, VocabularyError, AnswersUnavailableError,
                                   ConfigError)
from groundvqa.core.sampling import sample_frame_indices
from groundvqa.sim.scene import generate_scene
from groundvqa.sim.render import SceneFrames
from groundvqa.sim.qa import answer_vocabulary, derive_qa

from groundvqa.tests.tutils import TSCENE_PARAMS, TSAMPLING, TVQA_NET, TVQA_TRAIN
from groundvqa.tests.settings import TEST_MODELS_PATH

from groundvqa.objs.vqa import *

###################################################################################################
###################################################################################################

def test_train_vqa(tvqa, tsamples):

    assert isinstance(tvqa, VQAModelState)
    assert len(tvqa.history) == TVQA_TRAIN.epochs
    assert np.all(np.isfinite(tvqa.history))

    n_batches = int(np.ceil(len(tsamples) / TVQA_TRAIN.batch_size))
    assert tvqa.step == TVQA_TRAIN.epochs * n_batches
    assert len(tvqa.answers) == len(answer_vocabulary())

def test_train_vqa_determinism(tsamples, tframes, tvqa):

    state = train_vqa(tsamples, tframes, TVQA_TRAIN, TVQA_NET, sampling=TSAMPLING)

    assert np.array_equal(state.get_parameters(), tvqa.get_parameters())
    assert state.history == tvqa.history

def test_train_vqa_no_epochs(tsamples, tframes):

    state = train_vqa(tsamples, tframes, TVQA_TRAIN._replace(epochs=0), TVQA_NET,
                      sampling=TSAMPLING)

    assert state.step == 0
    assert state.history == []

def test_train_vqa_vocabulary_error(tsamples, tframes):

    with raises(VocabularyError):
        train_vqa(tsamples[:1], tframes, TVQA_TRAIN, TVQA_NET, answers=['blue cup'])

    with raises(VocabularyError):
        train_vqa([tsamples[0]._replace(answer=None)], tframes, TVQA_TRAIN, TVQA_NET)

def test_predict_answer(tvqa, tsamples, tframes):

    sample = tsamples[0]
    feats = compute_video_features(tframes, sample.video, TSAMPLING)
    assert feats.ndim == 1

    indices = list(range(0, sample.video.num_frames, 3))
    result = predict_answer(tframes(sample.video, indices), sample.question, tvqa)

    assert result.answer in tvqa.answers
    assert result.source == 'model'
    assert 0. <= result.confidence <= 1.

    probs = answer_probabilities(tframes(sample.video, indices), sample.question, tvqa)
    assert np.isclose(probs.sum(), 1.)
    assert result.confidence == probs.max()

def test_predict_answer_no_frames(tvqa):

    with raises(NoDataError):
        predict_answer(np.zeros((0, 8, 8, 3)), 'track the first red square that appears', tvqa)

def test_oracle_answer(tsample):

    result = oracle_answer(tsample)

    assert result.answer == tsample.answer
    assert result.confidence == 1.0
    assert result.source == 'oracle'

    with raises(AnswersUnavailableError):
        oracle_answer(tsample._replace(answer=None))

def test_vqa_save_load(tvqa):

    ckpt_path = TEST_MODELS_PATH / 'tvqa.ckpt'
    meta_path = TEST_MODELS_PATH / 'tvqa.json'
    tvqa.save(ckpt_path, meta_path, 'hash0')

    loaded = VQAModelState.load(ckpt_path, meta_path, 'hash0')

    assert np.array_equal(loaded.get_parameters(), tvqa.get_parameters())
    assert loaded.answers.answers == tvqa.answers.answers
    assert loaded.tokens.tokens == tvqa.tokens.tokens
    assert loaded.history == tvqa.history
    assert loaded.step == tvqa.step
    assert loaded.net_config == tvqa.net_config

    with raises(ConfigError):
        VQAModelState.load(ckpt_path, meta_path, 'hash1')

def test_train_vqa_deterministic_kernels(tsamples, tframes):

    torch.use_deterministic_algorithms(False)
    train_vqa(tsamples[:2], tframes, TVQA_TRAIN._replace(epochs=1), TVQA_NET, sampling=TSAMPLING)

    assert torch.are_deterministic_algorithms_enabled()

def test_train_vqa_learns():

    scenes = {'lvid_{}'.format(ind) : generate_scene(TSCENE_PARAMS, seed=300 + ind) \
        for ind in range(40)}
    frames = SceneFrames(scenes)
    samples = [sample for video_id, scene in scenes.items() \
        for sample in derive_qa(scene, video_id)]

    # Default training and network settings
    state = train_vqa(samples, frames, sampling=TSAMPLING)

    assert state.history[-1] < state.history[0]

    n_correct = 0
    for sample in samples:
        indices = sample_frame_indices(sample.video.num_frames, sample.video.native_fps,
                                       TSAMPLING)
        result = predict_answer(frames(sample.video, indices), sample.question, state)
        n_correct += result.answer == sample.answer

    assert n_correct / len(samples) > 1. / len(state.answers)
