"""Tests for groundvqa.core.boxes."""

import numpy as np
from pytest import raises, approx

from groundvqa.core.errors import GeometryError
from groundvqa.data import BoundingBox

from groundvqa.core.boxes import *

###################################################################################################
###################################################################################################

def test_check_box():

    check_box(BoundingBox(0, 0, 1, 1))

    for bad in [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 2), (0, 0, np.nan, 1), (0, 0, np.inf, 1)]:
        with raises(GeometryError):
            check_box(bad)

def test_iou():

    assert iou((0, 0, 10, 10), (0, 0, 10, 10)) == 1.
    assert iou((0, 0, 10, 10), (5, 0, 15, 10)) == approx(1 / 3)
    assert iou((0, 0, 1, 1), (2, 2, 3, 3)) == 0.

    # Nested boxes: the inner box covers a quarter of the outer box
    assert iou((0, 0, 4, 4), (1, 1, 3, 3)) == approx(0.25)

    with raises(GeometryError):
        iou((0, 0, 0, 0), (0, 0, 1, 1))

def test_iou_symmetric():

    rng = np.random.default_rng(0)
    for _ in range(20):
        box_a = np.concatenate([rng.uniform(0, 5, 2), rng.uniform(6, 10, 2)])
        box_b = np.concatenate([rng.uniform(0, 5, 2), rng.uniform(6, 10, 2)])
        assert iou(box_a, box_b) == approx(iou(box_b, box_a))
        assert 0. <= iou(box_a, box_b) <= 1.

def test_giou():

    assert giou((0, 0, 1, 1), (0, 0, 1, 1)) == approx(1.)

    # Unit boxes at opposite corners of a 3x3 enclosure
    assert giou((0, 0, 1, 1), (2, 2, 3, 3)) == approx(0. - (9 - 2) / 9)

    # Far apart boxes approach -1
    assert giou((0, 0, 1, 1), (1000, 1000, 1001, 1001)) == approx(-1., abs=1e-5)

    with raises(GeometryError):
        giou((0, 0, 1, 1), (1, 1, 1, 2))

def test_iou_matrix():

    boxes_a = [[0, 0, 10, 10], [20, 20, 30, 30]]
    boxes_b = [[0, 0, 10, 10], [5, 0, 15, 10], [50, 50, 60, 60]]

    out = iou_matrix(boxes_a, boxes_b)

    assert out.shape == (2, 3)
    for ind_a, box_a in enumerate(boxes_a):
        for ind_b, box_b in enumerate(boxes_b):
            assert out[ind_a, ind_b] == approx(iou(box_a, box_b))

    assert iou_matrix(np.zeros((0, 4)), boxes_b).shape == (0, 3)

def test_box_conversions():

    xyxy = np.array([[2., 4., 6., 10.]])
    cxcywh = xyxy_to_cxcywh(xyxy)

    assert np.allclose(cxcywh, [[4., 7., 4., 6.]])
    assert np.allclose(cxcywh_to_xyxy(cxcywh), xyxy)

def test_normalize_boxes():

    out = normalize_boxes([0, 0, 10, 20], 20, 40)
    assert np.allclose(out, [0.25, 0.25, 0.5, 0.5])

def test_denormalize_box():

    box = denormalize_box([0.25, 0.25, 0.5, 0.5], 20, 40)
    assert isinstance(box, BoundingBox)
    assert np.allclose(box, [0, 0, 10, 20])

    # Boxes reaching outside of the frame are clipped
    box = denormalize_box([0.9, 0.5, 0.4, 0.2], 10, 10)
    assert box.x2 == 10.
    assert box.x1 == approx(7.)

def test_denormalize_box_degenerate():

    # Zero sized, and fully outside, boxes are widened to a valid box within the frame
    for norm_box in [[0.5, 0.5, 0., 0.], [1.5, 0.5, 0.1, 0.1], [0., 0., 0., 0.]]:
        box = denormalize_box(norm_box, 16, 16)
        check_box(box)
        assert box.width == approx(MIN_BOX_SIZE)
        assert 0. <= box.x1 and box.x2 <= 16.
