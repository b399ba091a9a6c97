"""Tests for groundvqa.analysis.hota."""

import warnings

import numpy as np
from pytest import raises, warns, approx

from groundvqa.core.errors import DataError
from groundvqa.data import TrackSet, Tubelet

from groundvqa.tests.tutils import get_ttrack, random_track_sets, brute_force_hota
from groundvqa.tests.settings import TEST_REPORTS_PATH

from groundvqa.analysis.hota import *

###################################################################################################
###################################################################################################

def _track_sets(pred_tracks, gt_tracks, key='vid|q'):
    return (TrackSet({key : pred_tracks}, 'prediction'),
            TrackSet({key : gt_tracks}, 'ground_truth'))

def test_alphas():

    assert len(ALPHAS) == 19
    assert ALPHAS[0] == approx(0.05)
    assert ALPHAS[-1] == approx(0.95)

def test_sequence_key():

    assert sequence_key('vid0', 'track the red cup') == 'vid0|track the red cup'

def test_match_frame():

    assert match_frame([[0, 0, 2, 2]], [[0, 0, 2, 2]], 0.5) == [(0, 0)]
    assert match_frame([[0, 0, 2, 2]], [[5, 5, 7, 7]], 0.5) == []
    assert match_frame(np.zeros((0, 4)), [[0, 0, 2, 2]], 0.5) == []

def test_match_similarity_max_pairs():

    # A greedy match on the best pair would only find one pair
    similarity = np.array([[0.9, 0.6], [0.6, 0.]])
    rows, cols = match_similarity(similarity, 0.5)

    assert sorted(zip(rows, cols)) == [(0, 1), (1, 0)]

def test_match_similarity_max_score():

    similarity = np.array([[0.6, 0.55], [0.5, 0.58]])

    rows, cols = match_similarity(similarity, 0.5)
    assert sorted(zip(rows, cols)) == [(0, 0), (1, 1)]

    rows, cols = match_similarity(similarity, 0.59)
    assert sorted(zip(rows, cols)) == [(0, 0)]

    # The secondary score can overrule the similarity, with the count unchanged
    rows, cols = match_similarity(similarity, 0.5, np.array([[0., 1.], [1., 0.]]))
    assert sorted(zip(rows, cols)) == [(0, 1), (1, 0)]

def test_match_similarity_threshold_tolerance():

    rows, _ = match_similarity(np.array([[0.3]]), 0.1 + 0.2)
    assert len(rows) == 1

def test_hota_perfect():

    tracks = [get_ttrack('a', range(10)), get_ttrack('b', range(3, 8), offset=(0., 10.))]
    report = compute_hota(*_track_sets(tracks, tracks))

    assert report.hota == 1.0
    assert np.all(report.det_a == 1.0)
    assert np.all(report.ass_a == 1.0)
    assert np.all(report.fn == 0) and np.all(report.fp == 0)
    assert report.flagged == []

def test_hota_empty_predictions():

    report = compute_hota(*_track_sets([], [get_ttrack('a', range(10))]))

    assert report.hota == 0.0
    assert np.all(report.fn == 10)
    assert np.all(report.tp == 0)

def test_hota_empty_both():

    report = compute_hota(*_track_sets([], []))

    assert report.hota == 0.0

def test_hota_threshold():

    # Shifted by one pixel: IoU of 12 / 20
    gt = [get_ttrack('a', range(10))]
    pred = [get_ttrack('p', range(10), offset=(1., 0.))]
    report = compute_hota(*_track_sets(pred, gt), alphas=[0.5, 0.7])

    assert np.array_equal(report.hota_alpha, [1., 0.])
    assert report.hota == 0.5

def test_hota_id_switch():

    gt = [get_ttrack('a', range(10))]
    pred = [get_ttrack('p0', range(5)), get_ttrack('p1', range(5, 10))]
    report = compute_hota(*_track_sets(pred, gt))

    assert np.all(report.det_a == 1.)
    assert np.allclose(report.ass_a, 0.5)
    assert report.hota == approx(np.sqrt(0.5))

def test_hota_false_positives():

    gt = [get_ttrack('a', range(10))]
    pred = gt + [get_ttrack('p', range(10), offset=(20., 20.))]
    report = compute_hota(*_track_sets(pred, gt))

    assert np.all(report.det_a == 0.5)
    assert np.all(report.det_re == 1.)
    assert np.all(report.det_pr == 0.5)
    assert np.all(report.ass_a == 1.)

def test_hota_brute_force():

    rng = np.random.default_rng(0)
    alphas = np.array([0.1, 0.3, 0.5, 0.7, 0.9])

    for _ in range(200):
        pred, gt = random_track_sets(rng, n_frames=3, max_tracks=2,
                                     n_sequences=int(rng.integers(1, 3)))
        report = compute_hota(pred, gt, alphas)
        hota, hota_alpha = brute_force_hota(pred, gt, alphas)

        assert abs(report.hota - hota) <= 1e-9
        assert np.allclose(report.hota_alpha, hota_alpha, rtol=0, atol=1e-9)

def test_hota_symmetry():

    rng = np.random.default_rng(1)
    for _ in range(20):
        pred, gt = random_track_sets(rng, n_frames=4, max_tracks=3)
        forward = compute_hota(pred, gt)
        backward = compute_hota(TrackSet(gt.tracks, 'prediction'),
                                TrackSet(pred.tracks, 'ground_truth'))

        assert forward.hota == approx(backward.hota)

def test_hota_flagged():

    gt = TrackSet({'vid|q1' : [get_ttrack('a', range(4))],
                   'vid|q2' : [get_ttrack('a', range(4))]}, 'ground_truth')
    pred = TrackSet({'vid|q1' : [get_ttrack('a', range(4))]}, 'prediction')

    with warns(UserWarning):
        report = compute_hota(pred, gt)

    assert report.flagged == ['vid|q2']
    assert np.all(report.fn == 4)
    assert report.per_sequence['vid|q1']['HOTA'] == 1.0
    assert report.per_sequence['vid|q2']['HOTA'] == 0.0

def test_hota_duplicate_ids():

    tracks = [get_ttrack('a', range(4)), get_ttrack('a', range(4, 8))]

    with raises(DataError):
        compute_hota(*_track_sets([get_ttrack('p', range(4))], tracks))

def test_build_track_sets(tsample):

    pred, gt = build_track_sets([tsample], [])

    assert list(gt.tracks) == [sequence_key(tsample.video.video_id, tsample.question)]
    assert pred.tracks == {}

def test_alignment_scores():

    gt = [get_ttrack('a', range(4))]
    pred = [get_ttrack('p', range(2, 6))]
    alignment, frames = alignment_scores(gt, pred)

    # Two shared frames, with identical boxes, over six frames in total
    assert alignment[0, 0] == approx(2 / 6)
    assert [frame[0] for frame in frames] == list(range(6))

def test_report_write_read(treport):

    path = TEST_REPORTS_PATH / 'treport.json'
    write_report(treport, path, {'config_hash' : 'hash0'})
    loaded = read_report(path)

    assert loaded.hota == treport.hota
    assert np.array_equal(loaded.tp, treport.tp)
    assert np.allclose(loaded.hota_alpha, treport.hota_alpha)
    assert loaded.per_sequence == treport.per_sequence
    assert loaded.flagged == treport.flagged

    with warnings.catch_warnings():
        warnings.simplefilter('error')
        read_report(path)

def test_hota_properties():

    rng = np.random.default_rng(2)
    for _ in range(20):
        pred, gt = random_track_sets(rng, n_frames=4, max_tracks=3, n_sequences=2)
        report = compute_hota(pred, gt)

        assert np.all(np.diff(report.tp) <= 0)
        assert np.all(np.diff(report.det_a) <= 1e-12)
        assert np.all(report.hota_alpha <= np.maximum(report.det_a, report.ass_a) + 1e-12)
        for scores in [report.det_a, report.ass_a, report.det_re, report.det_pr,
                       report.ass_re, report.ass_pr, report.hota_alpha]:
            assert np.all((scores >= 0.) & (scores <= 1. + 1e-12))

        # Renaming objects leaves every score unchanged
        renamed = TrackSet({key : [Tubelet('renamed_' + track.object_id, track.boxes,
                                           track.confidence) for track in tracks] \
            for key, tracks in pred.tracks.items()}, 'prediction')
        assert np.array_equal(compute_hota(renamed, gt).hota_alpha, report.hota_alpha)
