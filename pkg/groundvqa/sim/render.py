"""Rendering synthetic scenes to frames, and computing their exact ground truth boxes."""

import numpy as np

from groundvqa.core.io import COORD_DECIMALS
from groundvqa.data import BoundingBox
from groundvqa.sim.scene import object_center

###################################################################################################
###################################################################################################

COLOR_VALUES = {'red' : (1., 0., 0.),
                'green' : (0., 1., 0.),
                'blue' : (0., 0., 1.),
                'yellow' : (1., 1., 0.)}

###################################################################################################
###################################################################################################

def is_visible(obj, frame):
    """Check whether an object is visible at a given frame."""

    return frame >= obj.appearance_frame


def object_box(obj, frame):
    """Compute the analytic bounding box of an object at a given frame.

    Parameters
    ----------
    obj : SceneObject
        Object to get the box for.
    frame : int
        Frame index.

    Returns
    -------
    BoundingBox
        Box in pixels, rounded to the stored coordinate precision.

    Notes
    -----
    The box is the full extent of the object, whether or not it is occluded.
    """

    cx, cy = object_center(obj, frame)
    half = obj.size / 2

    return BoundingBox(*[round(val, COORD_DECIMALS) for val in \
                         (cx - half, cy - half, cx + half, cy + half)])


def object_mask(obj, frame, width, height):
    """Compute which pixels an object covers at a given frame.

    Parameters
    ----------
    obj : SceneObject
        Object to draw.
    frame : int
        Frame index.
    width, height : int
        Canvas size, in pixels.

    Returns
    -------
    2d array of bool, shape: [height, width]
        Mask of pixels whose centers lie inside the object.
        All False if the object is not yet visible.
    """

    if not is_visible(obj, frame):
        return np.zeros((height, width), dtype=bool)

    cx, cy = object_center(obj, frame)
    half = obj.size / 2

    xs = np.arange(width)[None, :] + 0.5
    ys = np.arange(height)[:, None] + 0.5

    if obj.shape == 'square':
        mask = (np.abs(xs - cx) <= half) & (np.abs(ys - cy) <= half)
    elif obj.shape == 'circle':
        mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= half ** 2
    elif obj.shape == 'triangle':
        # Apex at the top center of the box, base along the bottom edge
        depth = ys - (cy - half)
        mask = (depth >= 0) & (ys <= cy + half) & (np.abs(xs - cx) <= depth / 2)
    else:
        raise ValueError("Shape {} not understood.".format(obj.shape))

    return mask


def render_frame(scene, frame):
    """Render a single frame of a scene.

    Parameters
    ----------
    scene : SceneSpec
        Scene to render.
    frame : int
        Frame index.

    Returns
    -------
    3d array, shape: [height, width, 3]
        RGB frame, with values in [0, 1].
    """

    image = np.zeros((scene.height, scene.width, 3), dtype=np.float32)

    for obj in scene.objects:
        image[object_mask(obj, frame, scene.width, scene.height)] = COLOR_VALUES[obj.color]

    return image


def render_video(scene, indices=None):
    """Render the frames of a scene.

    Parameters
    ----------
    scene : SceneSpec
        Scene to render.
    indices : list of int, optional
        Frames to render. If not provided, renders every frame.

    Returns
    -------
    4d array, shape: [n_frames, height, width, 3]
        RGB frames, with values in [0, 1].

    Notes
    -----
    The background is black. Objects are painted in list order, so later objects
    occlude earlier ones, and are not drawn before their appearance frame.
    """

    indices = range(scene.num_frames) if indices is None else indices

    frames = np.zeros((len(indices), scene.height, scene.width, 3), dtype=np.float32)
    for ind, frame in enumerate(indices):
        frames[ind] = render_frame(scene, frame)

    return frames


class SceneFrames():
    """Frame source that renders frames of known scenes on request.

    Parameters
    ----------
    scenes : dict of {str : SceneSpec}
        Scenes, keyed by video identifier.
    """

    def __init__(self, scenes):
        """Initialize the frame source."""

        self.scenes = scenes


    def __call__(self, video, indices):
        """Render the requested frames of a video.

        Parameters
        ----------
        video : VideoMeta
            Video to get frames for.
        indices : list of int
            Frames to get.

        Returns
        -------
        4d array, shape: [n_frames, height, width, 3]
            RGB frames, with values in [0, 1].
        """

        return render_video(self.scenes[video.video_id], indices)
