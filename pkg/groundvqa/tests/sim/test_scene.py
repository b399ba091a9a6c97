"""Tests for groundvqa.sim.scene."""

import numpy as np
from pytest import raises

from groundvqa.core.errors import SceneError
from groundvqa.data import SceneParams, SceneSpec

from groundvqa.sim.scene import *

###################################################################################################
###################################################################################################

def test_generate_scene():

    scene = generate_scene(SceneParams(), 42)

    assert isinstance(scene, SceneSpec)
    assert scene.seed == 42
    assert 30 <= scene.num_frames <= 60
    assert 1 <= len(scene.objects) <= 4
    assert (scene.width, scene.height) == (64, 64)

    for obj in scene.objects:
        assert obj.shape in SHAPES
        assert obj.color in COLORS
        assert 0 <= obj.appearance_frame < scene.num_frames

def test_generate_scene_deterministic():

    assert generate_scene(SceneParams(), 7) == generate_scene(SceneParams(), 7)
    assert generate_scene(SceneParams(), 7) != generate_scene(SceneParams(), 8)

def test_generate_scene_one_object():

    scene = generate_scene(SceneParams(min_objects=1, max_objects=1), 3)
    assert len(scene.objects) == 1

def test_generate_scene_trajectories():

    for seed in range(20):
        scene = generate_scene(SceneParams(), seed)
        for obj in scene.objects:
            half = obj.size / 2
            for frame in (obj.appearance_frame, scene.num_frames - 1):
                cx, cy = object_center(obj, frame)
                assert half - 1e-6 <= cx <= scene.width - half + 1e-6
                assert half - 1e-6 <= cy <= scene.height - half + 1e-6

def test_check_scene_params():

    check_scene_params(SceneParams())

    for bad in [SceneParams(width=8), SceneParams(min_objects=0),
                SceneParams(min_objects=1, max_objects=7),
                SceneParams(min_frames=10, max_frames=5),
                SceneParams(min_size=0.), SceneParams(fps=0.)]:
        with raises(ValueError):
            check_scene_params(bad)

def test_generate_scene_infeasible():

    # Objects larger than the canvas can not be placed
    with raises(SceneError):
        generate_scene(SceneParams(width=16, height=16, min_size=20., max_size=20.), 0)

def test_check_scene_params_classes():

    for bad in [SceneParams(repeat_prob=1.5), SceneParams(appearance_span=0.),
                SceneParams(min_gap=0), SceneParams(max_instances=0),
                SceneParams(max_speed=-1.)]:
        with raises(ValueError):
            check_scene_params(bad)

def test_generate_scene_classes():

    params = SceneParams(min_objects=6, max_objects=6, repeat_prob=0.8)
    n_repeats = 0

    for seed in range(30):
        scene = generate_scene(params, seed)
        span = max(1, int(scene.num_frames * params.appearance_span))

        by_class = {}
        for obj in scene.objects:
            by_class.setdefault((obj.shape, obj.color), []).append(obj.appearance_frame)

        for frames in by_class.values():
            assert len(frames) <= params.max_instances
            assert frames[0] < span
            assert all(later - earlier >= params.min_gap \
                for earlier, later in zip(frames[:-1], frames[1:]))
            n_repeats += len(frames) - 1

    assert n_repeats > 0

def test_generate_scene_no_repeats():

    scene = generate_scene(SceneParams(min_objects=6, max_objects=6, repeat_prob=0.), 5)

    assert len({(obj.shape, obj.color) for obj in scene.objects}) == 6
    span = max(1, int(scene.num_frames * SceneParams().appearance_span))
    assert all(obj.appearance_frame < span for obj in scene.objects)

def test_generate_scene_separated():

    # Two small objects on a large canvas are placed apart at their appearance
    params = SceneParams(width=64, height=64, min_objects=2, max_objects=2,
                         min_size=6., max_size=6., repeat_prob=0.)

    for seed in range(10):
        first, second = generate_scene(params, seed).objects
        if first.appearance_frame == second.appearance_frame:
            dist = np.abs(np.array(first.start) - np.array(second.start))
            assert np.any(dist >= 6.)
