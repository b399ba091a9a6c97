"""Generating synthetic 'moving shapes' scenes."""

import numpy as np

from groundvqa.core.errors import SceneError
from groundvqa.data import SceneObject, SceneSpec, SceneParams

###################################################################################################
###################################################################################################

SHAPES = ('square', 'circle', 'triangle')
COLORS = ('red', 'green', 'blue', 'yellow')
MAX_OBJECTS = 6
MIN_CANVAS = 16

# Number of attempts at placing an object with a trajectory that stays on the canvas
MAX_PLACEMENT_TRIES = 100

###################################################################################################
###################################################################################################

def check_scene_params(params):
    """Check that scene settings are valid.

    Parameters
    ----------
    params : SceneParams
        Settings to check.

    Raises
    ------
    ValueError
        If any setting is out of its valid range.
    """

    if params.width < MIN_CANVAS or params.height < MIN_CANVAS:
        raise ValueError("The canvas must be at least {0}x{0} pixels.".format(MIN_CANVAS))
    if not 1 <= params.min_objects <= params.max_objects <= MAX_OBJECTS:
        raise ValueError("The number of objects must be within [1, {}].".format(MAX_OBJECTS))
    if not 1 <= params.min_frames <= params.max_frames:
        raise ValueError("The frame range is invalid: [{}, {}].".format(\
            params.min_frames, params.max_frames))
    if not 0 < params.min_size <= params.max_size:
        raise ValueError("The object size range is invalid.")
    if not params.fps > 0:
        raise ValueError("The frame rate must be positive.")
    if not params.max_speed >= 0:
        raise ValueError("The maximum speed can not be negative.")
    if not 0 <= params.repeat_prob <= 1:
        raise ValueError("The repeat probability must be within [0, 1].")
    if not 0 < params.appearance_span <= 1:
        raise ValueError("The appearance span must be within (0, 1].")
    if params.min_gap < 1 or params.max_instances < 1:
        raise ValueError("The gap between, and number of, instances of a class must be "
                         "at least 1.")


def object_center(obj, frame):
    """Compute the center of an object at a given frame.

    Parameters
    ----------
    obj : SceneObject
        Object to locate.
    frame : int
        Frame index.

    Returns
    -------
    tuple of (float, float)
        Center (x, y) of the object, in pixels.
    """

    elapsed = frame - obj.appearance_frame

    return (obj.start[0] + obj.velocity[0] * elapsed, obj.start[1] + obj.velocity[1] * elapsed)


def generate_scene(params=SceneParams(), seed=0):
    """Generate a synthetic scene of moving shapes.

    Parameters
    ----------
    params : SceneParams, optional
        Settings for the scene.
    seed : int, optional, default: 0
        Seed for the random generator. The same settings and seed give the same scene.

    Returns
    -------
    SceneSpec
        Generated scene.

    Raises
    ------
    SceneError
        If an object can not be placed on a valid trajectory within the allowed attempts.

    Notes
    -----
    Objects move on linear trajectories, and whole objects stay on the canvas for
    every frame from their appearance to the end of the scene.

    Objects of a new (color, shape) class appear early in the scene. A repeated class
    appears at least `min_gap` frames after the previous object of that class, and at
    most `max_instances` objects share a class. Placement first looks for a trajectory
    that does not overlap the objects already present, then for any valid one.
    """

    check_scene_params(params)
    rng = np.random.default_rng(seed)

    num_frames = int(rng.integers(params.min_frames, params.max_frames + 1))
    n_objects = int(rng.integers(params.min_objects, params.max_objects + 1))
    span = max(1, int(num_frames * params.appearance_span))

    objects = []
    for ind in range(n_objects):

        appearance = None

        # Re-use an earlier class sometimes, so that ordinal questions with k > 1 arise
        repeatable = _repeatable_classes(objects, params, num_frames)
        if repeatable and rng.random() < params.repeat_prob:
            shape, color = repeatable[int(rng.integers(0, len(repeatable)))]
            last = max(obj.appearance_frame for obj in objects \
                if (obj.shape, obj.color) == (shape, color))
            appearance = int(rng.integers(last + params.min_gap,
                                          min(last + 2 * params.min_gap, num_frames)))

        if appearance is None:
            used = {(obj.shape, obj.color) for obj in objects}
            unused = [(shape, color) for shape in SHAPES for color in COLORS \
                if (shape, color) not in used]
            shape, color = unused[int(rng.integers(0, len(unused)))]
            appearance = int(rng.integers(0, span))

        size = float(np.round(rng.uniform(params.min_size, params.max_size), 2))

        start, velocity = _place_object(rng, params, size, appearance, num_frames, objects)
        objects.append(SceneObject(shape, color, appearance, start, velocity, size))

    return SceneSpec(int(seed), num_frames, params.width, params.height,
                     float(params.fps), tuple(objects))


def _repeatable_classes(objects, params, num_frames):
    """Get the classes of earlier objects that can take another, later, instance."""

    classes = []
    for obj in objects:

        key = (obj.shape, obj.color)
        instances = [other.appearance_frame for other in objects \
            if (other.shape, other.color) == key]

        if key not in classes and len(instances) < params.max_instances \
            and max(instances) + params.min_gap < num_frames:
            classes.append(key)

    return classes


def _place_object(rng, params, size, appearance, num_frames, objects=()):
    """Draw a start point & velocity that keep an object on the canvas until the last frame.

    For the first half of the attempts, the object must also stay clear of the objects
    present at its appearance frame and at the last frame.
    """

    half = size / 2
    low = np.array([half, half])
    high = np.array([params.width - half, params.height - half])

    if np.any(high <= low):
        raise SceneError("Object of size {} does not fit on the canvas.".format(size))

    duration = num_frames - 1 - appearance
    for attempt in range(MAX_PLACEMENT_TRIES):

        start = np.round(rng.uniform(low, high), 2)
        velocity = np.round(rng.uniform(-params.max_speed, params.max_speed, 2), 3)
        end = start + velocity * duration

        if not (np.all(end >= low) and np.all(end <= high)):
            continue

        if attempt < MAX_PLACEMENT_TRIES // 2 and \
            (_overlaps(start, size, appearance, objects) or \
             _overlaps(end, size, num_frames - 1, objects)):
            continue

        return (float(start[0]), float(start[1])), (float(velocity[0]), float(velocity[1]))

    raise SceneError("Could not place an object on a valid trajectory "
                     "after {} attempts.".format(MAX_PLACEMENT_TRIES))


def _overlaps(center, size, frame, objects):
    """Check whether a square footprint overlaps any object present at a frame."""

    for obj in objects:
        if obj.appearance_frame <= frame:
            other = object_center(obj, frame)
            reach = (size + obj.size) / 2
            if abs(center[0] - other[0]) < reach and abs(center[1] - other[1]) < reach:
                return True

    return False
