"""Tests for groundvqa.nets.features."""

import numpy as np
from pytest import raises, approx

from groundvqa.sim.render import render_video, COLOR_VALUES
from groundvqa.tests.tutils import get_tscene, get_tscene_object

from groundvqa.nets.features import *

###################################################################################################
###################################################################################################

def test_frame_features():

    square = get_tscene_object(shape='square', color='red', size=8., start=(16., 16.),
                               velocity=(0., 0.))
    frames = render_video(get_tscene([square], num_frames=2))

    feats = frame_features(frames)
    n_colors = len(COLOR_VALUES)

    assert feats.shape == (2, 2 * n_colors)
    assert feats[0, 0] == approx(64 / (32 * 32))
    assert feats[0, n_colors] == approx(1.)

    # Absent colors have zero area and fill
    assert np.all(feats[:, 1:n_colors] == 0)
    assert np.all(feats[:, n_colors + 1:] == 0)

def test_frame_features_shapes():

    fills = {}
    for shape in ('square', 'circle', 'triangle'):
        obj = get_tscene_object(shape=shape, size=14., start=(16., 16.), velocity=(0., 0.))
        fills[shape] = frame_features(render_video(get_tscene([obj], num_frames=1)))[0, 4]

    assert fills['square'] > fills['circle'] > fills['triangle']

def test_video_features():

    obj = get_tscene_object(appearance=3)
    frames = render_video(get_tscene([obj], num_frames=6))

    feats = video_features(frames)
    assert feats.shape == (N_VIDEO_FEATURES,)
    assert feats.dtype == np.float32

    with raises(ValueError):
        video_features(frames[:0])

def test_frame_regions():

    square = get_tscene_object(color='red', size=8., start=(16., 16.), velocity=(0., 0.))
    frames = render_video(get_tscene([square], num_frames=3))

    feats, boxes, mask = frame_regions(frames, max_regions=4)

    assert feats.shape == (3, 5, N_REGION_FEATURES)
    assert boxes.shape == (3, 5, 4)
    assert mask.tolist() == [[False, False, True, True, True]] * 3

    # Whole-frame slot
    assert np.all(feats[:, 0, -1] == 1.)
    assert np.allclose(boxes[:, 0], FRAME_REGION_BOX)

    # The square, with its box, fill and growing age
    assert np.allclose(boxes[:, 1], [0.5, 0.5, 0.25, 0.25])
    assert np.all(feats[:, 1, 0] == 1.)
    assert np.all(feats[:, 1, -1] == 0.)
    assert feats[0, 1, -3] == approx(1.)
    assert np.allclose(feats[:, 1, -2], np.log1p([0, 1, 2]))

def test_frame_regions_order():

    small = get_tscene_object(color='blue', size=4., start=(6., 6.), velocity=(0., 0.))
    large = get_tscene_object(color='green', size=10., start=(20., 20.), velocity=(0., 0.))
    frames = render_video(get_tscene([small, large], num_frames=1))

    feats, boxes, mask = frame_regions(frames, max_regions=2)
    assert not mask[0].any()
    assert feats[0, 1, 1] == 1. and feats[0, 2, 2] == 1.

    # Only the largest region is kept
    feats, boxes, mask = frame_regions(frames, max_regions=1)
    assert feats.shape[1] == 2
    assert feats[0, 1, 1] == 1.

def test_frame_regions_blank():

    feats, boxes, mask = frame_regions(np.zeros((2, 16, 16, 3)), max_regions=3)

    assert mask[:, 1:].all()
    assert not mask[:, 0].any()
    assert np.all(feats[:, 1:] == 0.)

def test_batch_regions():

    frames = np.zeros((2, 3, 16, 16, 3))
    frames[1, :, 4:8, 4:8] = COLOR_VALUES['red']

    feats, boxes, mask = batch_regions(frames, max_regions=2)

    assert feats.shape == (2, 3, 3, N_REGION_FEATURES)
    assert mask[0, :, 1].all()
    assert not mask[1, :, 1].any()
