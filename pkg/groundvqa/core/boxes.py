"""Functions for working with bounding boxes.

NOTES
-----
- File formats use the corner convention (x1, y1, x2, y2), in pixels.
- The grounding network operates on normalized center boxes (cx, cy, w, h) in [0, 1].
"""

import numpy as np

from groundvqa.core.errors import GeometryError
from groundvqa.data import BoundingBox

###################################################################################################
###################################################################################################

# Smallest side length of boxes scaled out of normalized coordinates, in pixels
MIN_BOX_SIZE = 0.01

###################################################################################################
###################################################################################################

def check_box(box):
    """Check that a box has positive area, raising an error if not.

    Parameters
    ----------
    box : BoundingBox or array_like of [x1, y1, x2, y2]
        Box to check.

    Raises
    ------
    GeometryError
        If the box has non-finite coordinates, or zero or negative width or height.
    """

    x1, y1, x2, y2 = box

    if not np.all(np.isfinite([x1, y1, x2, y2])):
        raise GeometryError("Box has non-finite coordinates: {}.".format(tuple(box)))
    if not (x2 > x1 and y2 > y1):
        raise GeometryError("Box is degenerate (zero or negative area): {}.".format(tuple(box)))


def iou(box_a, box_b):
    """Compute the intersection over union of two boxes.

    Parameters
    ----------
    box_a, box_b : BoundingBox or array_like of [x1, y1, x2, y2]
        Boxes to compare.

    Returns
    -------
    float
        Intersection area divided by union area, in [0, 1].

    Raises
    ------
    GeometryError
        If either box is degenerate.

    Examples
    --------
    Two boxes overlapping by half of their width:

    >>> iou((0, 0, 10, 10), (5, 0, 15, 10))
    0.3333333333333333
    """

    check_box(box_a)
    check_box(box_b)

    inter_w = max(0., min(box_a[2], box_b[2]) - max(box_a[0], box_b[0]))
    inter_h = max(0., min(box_a[3], box_b[3]) - max(box_a[1], box_b[1]))
    inter = inter_w * inter_h

    union = _area(box_a) + _area(box_b) - inter

    return float(min(1., max(0., inter / union)))


def giou(box_a, box_b):
    """Compute the generalized intersection over union of two boxes.

    Parameters
    ----------
    box_a, box_b : BoundingBox or array_like of [x1, y1, x2, y2]
        Boxes to compare.

    Returns
    -------
    float
        Generalized IoU, in [-1, 1].

    Raises
    ------
    GeometryError
        If either box is degenerate.

    Notes
    -----
    Generalized IoU subtracts, from the IoU, the fraction of the smallest enclosing box
    that is not covered by the union of the two boxes.
    """

    check_box(box_a)
    check_box(box_b)

    inter_w = max(0., min(box_a[2], box_b[2]) - max(box_a[0], box_b[0]))
    inter_h = max(0., min(box_a[3], box_b[3]) - max(box_a[1], box_b[1]))
    inter = inter_w * inter_h
    union = _area(box_a) + _area(box_b) - inter

    enclosure = (max(box_a[2], box_b[2]) - min(box_a[0], box_b[0])) * \
                (max(box_a[3], box_b[3]) - min(box_a[1], box_b[1]))

    return float(inter / union - (enclosure - union) / enclosure)


def iou_matrix(boxes_a, boxes_b):
    """Compute pairwise intersection over union between two sets of boxes.

    Parameters
    ----------
    boxes_a : 2d array, shape: [n_a, 4]
        Boxes, in corner convention.
    boxes_b : 2d array, shape: [n_b, 4]
        Boxes, in corner convention.

    Returns
    -------
    2d array, shape: [n_a, n_b]
        Pairwise IoU values.

    Raises
    ------
    GeometryError
        If any box is degenerate.
    """

    boxes_a = np.asarray(boxes_a, dtype=float).reshape(-1, 4)
    boxes_b = np.asarray(boxes_b, dtype=float).reshape(-1, 4)

    for box in np.vstack([boxes_a, boxes_b]):
        check_box(box)

    inter_w = np.clip(np.minimum(boxes_a[:, None, 2], boxes_b[None, :, 2]) - \
                      np.maximum(boxes_a[:, None, 0], boxes_b[None, :, 0]), 0, None)
    inter_h = np.clip(np.minimum(boxes_a[:, None, 3], boxes_b[None, :, 3]) - \
                      np.maximum(boxes_a[:, None, 1], boxes_b[None, :, 1]), 0, None)
    inter = inter_w * inter_h

    union = _area(boxes_a.T)[:, None] + _area(boxes_b.T)[None, :] - inter

    return np.clip(inter / union, 0., 1.)


def xyxy_to_cxcywh(boxes):
    """Convert boxes from corner to center convention.

    Parameters
    ----------
    boxes : array_like, shape: [..., 4]
        Boxes, as (x1, y1, x2, y2).

    Returns
    -------
    array, shape: [..., 4]
        Boxes, as (cx, cy, w, h).
    """

    boxes = np.asarray(boxes, dtype=float)
    x1, y1, x2, y2 = np.moveaxis(boxes, -1, 0)

    return np.stack([(x1 + x2) / 2, (y1 + y2) / 2, x2 - x1, y2 - y1], axis=-1)


def cxcywh_to_xyxy(boxes):
    """Convert boxes from center to corner convention.

    Parameters
    ----------
    boxes : array_like, shape: [..., 4]
        Boxes, as (cx, cy, w, h).

    Returns
    -------
    array, shape: [..., 4]
        Boxes, as (x1, y1, x2, y2).
    """

    boxes = np.asarray(boxes, dtype=float)
    cx, cy, wd, ht = np.moveaxis(boxes, -1, 0)

    return np.stack([cx - wd / 2, cy - ht / 2, cx + wd / 2, cy + ht / 2], axis=-1)


def normalize_boxes(boxes, width, height):
    """Scale pixel corner boxes into normalized center boxes.

    Parameters
    ----------
    boxes : array_like, shape: [..., 4]
        Boxes, in pixels, as (x1, y1, x2, y2).
    width, height : int
        Frame size, in pixels.

    Returns
    -------
    array, shape: [..., 4]
        Normalized boxes, as (cx, cy, w, h).
    """

    scale = np.array([width, height, width, height], dtype=float)

    return xyxy_to_cxcywh(np.asarray(boxes, dtype=float) / scale)


def denormalize_box(box, width, height, min_size=MIN_BOX_SIZE):
    """Scale a normalized center box into a pixel corner box, clipped to the frame.

    Parameters
    ----------
    box : array_like of [cx, cy, w, h]
        Normalized box.
    width, height : int
        Frame size, in pixels.
    min_size : float, optional
        Minimum width and height of the output box, in pixels.

    Returns
    -------
    BoundingBox
        Box in pixels, in corner convention.

    Notes
    -----
    Sides that end up shorter than `min_size` after clipping are widened around the
    clipped box center, staying within the frame.
    """

    x1, y1, x2, y2 = np.clip(cxcywh_to_xyxy(box), 0, 1) * [width, height, width, height]
    x1, x2 = _widen(x1, x2, width, min_size)
    y1, y2 = _widen(y1, y2, height, min_size)

    return BoundingBox(float(x1), float(y1), float(x2), float(y2))


def _widen(low, high, limit, min_size):
    """Widen a span to a minimum size, within [0, limit]."""

    if high - low >= min_size:
        return low, high

    low = float(np.clip((low + high - min_size) / 2, 0, limit - min_size))

    return low, low + min_size


def _area(box):
    """Area of a box (or of stacked boxes, given as [4, n])."""

    return (box[2] - box[0]) * (box[3] - box[1])
