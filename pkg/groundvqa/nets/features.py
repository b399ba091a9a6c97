"""Hand-crafted video features for the answering network, and frame regions for the grounder."""

import numpy as np
from scipy import ndimage

from groundvqa.sim.render import COLOR_VALUES

###################################################################################################
###################################################################################################

# Tolerance for a pixel to count as a palette color
COLOR_TOL = 0.1
N_VIDEO_FEATURES = 4 * len(COLOR_VALUES)

# Smallest connected component, in pixels, that counts as a region
MIN_REGION_PIXELS = 4
# Region descriptors: color one-hot, box, fill, log age and the whole-frame flag
N_REGION_FEATURES = len(COLOR_VALUES) + 7
# Box of the whole-frame slot, as normalized (cx, cy, w, h)
FRAME_REGION_BOX = (0.5, 0.5, 0.5, 0.5)

###################################################################################################
###################################################################################################

def frame_features(frames):
    """Compute per-frame color area and shape fill features.

    Parameters
    ----------
    frames : 4d array, shape: [n_frames, height, width, 3]
        RGB frames, with values in [0, 1].

    Returns
    -------
    2d array, shape: [n_frames, 2 * n_colors]
        Per palette color: the fraction of pixels of that color, and the fraction of the
        color's bounding region that it fills (about 1 for squares, pi/4 for circles and
        1/2 for triangles), or 0 if the color is absent.
    """

    frames = np.asarray(frames, dtype=np.float32)
    n_frames, height, width, _ = frames.shape

    areas, fills = [], []
    for color in COLOR_VALUES.values():

        mask = np.all(np.abs(frames - np.array(color, dtype=np.float32)) < COLOR_TOL, axis=-1)
        n_pixels = mask.sum(axis=(1, 2))
        areas.append(n_pixels / (height * width))

        rows, cols = mask.any(axis=2), mask.any(axis=1)
        extent_y = np.where(rows.any(1),
                            height - np.argmax(rows[:, ::-1], 1) - np.argmax(rows, 1), 0)
        extent_x = np.where(cols.any(1),
                            width - np.argmax(cols[:, ::-1], 1) - np.argmax(cols, 1), 0)
        region = extent_x * extent_y
        fills.append(np.divide(n_pixels, region, out=np.zeros(n_frames), where=region > 0))

    return np.stack(areas + fills, axis=1)


def video_features(frames):
    """Compute a fixed-size feature vector for a video.

    Parameters
    ----------
    frames : 4d array, shape: [n_frames, height, width, 3]
        RGB frames, with values in [0, 1].

    Returns
    -------
    1d array, shape: [N_VIDEO_FEATURES]
        Mean and max, over frames, of the per-frame features.

    Raises
    ------
    ValueError
        If no frames are given.
    """

    if len(frames) == 0:
        raise ValueError("Can not compute video features without any frames.")

    feats = frame_features(frames)

    return np.concatenate([feats.mean(axis=0), feats.max(axis=0)]).astype(np.float32)


def frame_regions(frames, max_regions=8):
    """Find the colored regions of a sequence of frames, and describe each of them.

    Parameters
    ----------
    frames : 4d array, shape: [n_frames, height, width, 3]
        RGB frames, in temporal order, with values in [0, 1].
    max_regions : int, optional, default: 8
        Maximum number of regions kept per frame. The largest are kept.

    Returns
    -------
    feats : 3d array, shape: [n_frames, max_regions + 1, N_REGION_FEATURES]
        Region descriptors.
    boxes : 3d array, shape: [n_frames, max_regions + 1, 4]
        Normalized region boxes, as (cx, cy, w, h).
    mask : 2d array of bool, shape: [n_frames, max_regions + 1]
        True for empty slots.

    Notes
    -----
    A region is a connected component of pixels of one palette color. It is described
    by a one-hot encoding of its color, its box, the fraction of its box it fills,
    log(1 + age), and a zero flag. The age is the number of consecutive preceding frames
    on which a region of the same color overlapped it.

    The first slot of each frame is a whole-frame entry, with the flag set and a fixed
    box, so that every frame has at least one slot to choose from.
    """

    frames = np.asarray(frames, dtype=np.float32)
    n_frames, height, width, _ = frames.shape
    n_slots = max_regions + 1

    feats = np.zeros((n_frames, n_slots, N_REGION_FEATURES), dtype=np.float32)
    boxes = np.zeros((n_frames, n_slots, 4), dtype=np.float32)
    mask = np.ones((n_frames, n_slots), dtype=bool)

    feats[:, 0, -1] = 1.
    boxes[:, 0] = FRAME_REGION_BOX
    mask[:, 0] = False

    scale = np.array([width, height, width, height], dtype=np.float32)

    previous = []
    for ind, frame in enumerate(frames):

        current = []
        for color_ind, color in enumerate(COLOR_VALUES.values()):

            pixels = np.all(np.abs(frame - np.array(color, dtype=np.float32)) < COLOR_TOL,
                            axis=-1)
            labels, n_labels = ndimage.label(pixels)
            if not n_labels:
                continue

            counts = np.bincount(labels.ravel())
            for label, (rows, cols) in enumerate(ndimage.find_objects(labels), 1):

                if counts[label] < MIN_REGION_PIXELS:
                    continue

                box = (cols.start, rows.start, cols.stop, rows.stop)
                age = max((prev_age + 1 for prev_color, prev_box, prev_age in previous \
                    if prev_color == color_ind and _boxes_overlap(box, prev_box)), default=0)
                fill = counts[label] / ((box[2] - box[0]) * (box[3] - box[1]))
                current.append((counts[label], color_ind, box, fill, age))

        current.sort(key=lambda region: -region[0])
        for slot, (_, color_ind, box, fill, age) in enumerate(current[:max_regions], 1):

            cxcywh = np.array([(box[0] + box[2]) / 2, (box[1] + box[3]) / 2,
                               box[2] - box[0], box[3] - box[1]]) / scale

            feats[ind, slot, color_ind] = 1.
            feats[ind, slot, len(COLOR_VALUES):len(COLOR_VALUES) + 4] = cxcywh
            feats[ind, slot, -3] = fill
            feats[ind, slot, -2] = np.log1p(age)
            boxes[ind, slot] = cxcywh
            mask[ind, slot] = False

        previous = [(color_ind, box, age) for _, color_ind, box, _, age in current]

    return feats, boxes, mask


def batch_regions(frames, max_regions=8):
    """Find the regions of a batch of frame sequences.

    Parameters
    ----------
    frames : 5d array, shape: [batch, n_frames, height, width, 3]
        RGB frames, with values in [0, 1].
    max_regions : int, optional, default: 8
        Maximum number of regions kept per frame.

    Returns
    -------
    feats, boxes, mask : arrays
        Outputs of `frame_regions`, stacked over the batch.
    """

    outputs = [frame_regions(item, max_regions) for item in frames]

    return tuple(np.stack(arrays) for arrays in zip(*outputs))


def _boxes_overlap(box_a, box_b):
    """Check whether two (x1, y1, x2, y2) pixel boxes share any area."""

    return min(box_a[2], box_b[2]) > max(box_a[0], box_b[0]) and \
        min(box_a[3], box_b[3]) > max(box_a[1], box_b[1])
