"""Building dataset splits: annotation files plus raw frame archives."""

import os
from functools import partial
from multiprocessing import Pool, cpu_count

import numpy as np

from groundvqa.core.io import check_output, save_json, load_json, write_annotations
from groundvqa.core.utils import progress_bar
from groundvqa.data import DatasetSplitSpec, SceneParams
from groundvqa.sim.scene import generate_scene
from groundvqa.sim.render import render_video
from groundvqa.sim.qa import derive_qa

###################################################################################################
###################################################################################################

## Settings & Globals
SPLIT_NAMES = ('train', 'val', 'test')
# Question counts of the reference challenge splits, which desk-scale splits are scaled from
REFERENCE_COUNTS = {'train' : 1859, 'val' : 3051, 'test' : 1859}
DEFAULT_SEEDS = {'train' : 1, 'val' : 2, 'test' : 3}
# Splits that are written without answers
UNANSWERED_SPLITS = ('test',)

ANNOTATION_FILE = 'annotations.json'
MANIFEST_FILE = 'manifest.json'
FRAMES_DIR = 'frames'
HEADER_FILE = 'header.json'
FRAME_TEMPLATE = 'frame_{:05d}.rgb'

###################################################################################################
###################################################################################################

def default_splits(scale=0.01, seeds=None):
    """Get split definitions, scaled from the reference challenge split sizes.

    Parameters
    ----------
    scale : float, optional, default: 0.01
        Factor applied to the reference question counts, rounded half-up.
    seeds : dict of {str : int}, optional
        Seeds per split. Defaults to 1, 2, 3 for train, val and test.

    Returns
    -------
    list of DatasetSplitSpec
        Definitions of the train, val and test splits.

    Examples
    --------
    >>> [split.num_samples for split in default_splits()]
    [19, 31, 19]
    """

    seeds = DEFAULT_SEEDS if seeds is None else seeds

    return [DatasetSplitSpec(name, max(1, int(np.floor(REFERENCE_COUNTS[name] * scale + 0.5))),
                             seeds[name]) for name in SPLIT_NAMES]


def check_split(split):
    """Check that a split definition is valid.

    Parameters
    ----------
    split : DatasetSplitSpec
        Split to check.

    Raises
    ------
    ValueError
        If the split name or size is invalid.
    """

    if split.name not in SPLIT_NAMES:
        raise ValueError("Split name {} not understood.".format(split.name))
    if split.num_samples < 1:
        raise ValueError("A split must have at least one sample.")


def generate_split_scenes(split, scene_params=SceneParams()):
    """Generate scenes, and their questions, until a split has enough samples.

    Parameters
    ----------
    split : DatasetSplitSpec
        Split to generate.
    scene_params : SceneParams, optional
        Settings for the scenes.

    Returns
    -------
    scenes : dict of {str : SceneSpec}
        Generated scenes, keyed by video identifier.
    samples : list of QASample
        Exactly `split.num_samples` question samples.
    """

    check_split(split)
    rng = np.random.default_rng(split.seed)

    scenes, samples = {}, []
    while len(samples) < split.num_samples:

        video_id = '{}_{:05d}'.format(split.name, len(scenes))
        scene = generate_scene(scene_params, int(rng.integers(0, 2**31 - 1)))
        scenes[video_id] = scene

        samples.extend(derive_qa(scene, video_id)[:split.num_samples - len(samples)])

    return scenes, samples


def build_split(split, out_dir, scene_params=SceneParams(), force=False,
                n_jobs=1, progress=None, info=None, verbose=False):
    """Build a dataset split on disk.

    Parameters
    ----------
    split : DatasetSplitSpec
        Split to build.
    out_dir : Path or str
        Directory to write the split to.
    scene_params : SceneParams, optional
        Settings for the scenes.
    force : bool, optional, default: False
        Whether to overwrite an existing split.
    n_jobs : int, optional, default: 1
        Number of jobs to render frames with. -1 uses all available cores.
    progress : {None, 'tqdm', 'tqdm.notebook'}, optional
        Which kind of progress bar to use. If None, no progress bar is used.
    info : dict, optional
        Extra information to store with the annotations and manifest.
    verbose : bool, optional, default: False
        Whether to print out status updates.

    Returns
    -------
    samples : list of QASample
        The samples of the split.
    scenes : dict of {str : SceneSpec}
        The scenes of the split, keyed by video identifier.

    Notes
    -----
    The split directory holds the annotation file, a 'frames' directory with one
    directory of raw RGB frames per video, and a manifest of all seeds, written last.
    Splits listed as unanswered (test) are written without answers.
    """

    check_output(os.path.join(out_dir, ANNOTATION_FILE), force)
    os.makedirs(os.path.join(out_dir, FRAMES_DIR), exist_ok=True)

    scenes, samples = generate_split_scenes(split, scene_params)

    if verbose:
        print('Building {} split: {} samples across {} videos.'.format(\
            split.name, len(samples), len(scenes)))

    frames_dir = os.path.join(out_dir, FRAMES_DIR)
    items = list(scenes.items())
    if n_jobs == 1:
        for item in progress_bar(items, progress, len(items), 'Rendering videos'):
            _write_scene(item, frames_dir)
    else:
        n_jobs = cpu_count() if n_jobs == -1 else n_jobs
        with Pool(processes=n_jobs) as pool:
            list(progress_bar(pool.imap(partial(_write_scene, frames_dir=frames_dir), items),
                              progress, len(items), 'Rendering videos'))

    write_annotations(os.path.join(out_dir, ANNOTATION_FILE), samples,
                      include_answers=split.name not in UNANSWERED_SPLITS, info=info)

    manifest = {'split' : split.name, 'num_samples' : split.num_samples, 'seed' : split.seed,
                'scene_params' : scene_params._asdict(),
                'scenes' : [{'video_id' : video_id, 'seed' : scene.seed} \
                    for video_id, scene in scenes.items()]}
    if info:
        manifest['info'] = info
    save_json(manifest, os.path.join(out_dir, MANIFEST_FILE))

    return samples, scenes


def write_frames(frames_dir, video_id, frames, fps):
    """Write the frames of a video to a raw frame archive.

    Parameters
    ----------
    frames_dir : Path or str
        Directory of the archive.
    video_id : str
        Identifier of the video.
    frames : 4d array, shape: [n_frames, height, width, 3]
        RGB frames, with values in [0, 1].
    fps : float
        Native frame rate of the video.

    Notes
    -----
    Each frame is stored as a raw 8-bit RGB file, named so that lexicographic order is
    frame order, next to a header file with the width, height, frame count and rate.
    """

    video_dir = os.path.join(frames_dir, video_id)
    os.makedirs(video_dir, exist_ok=True)

    n_frames, height, width, _ = frames.shape
    save_json({'width' : int(width), 'height' : int(height),
               'num_frames' : int(n_frames), 'fps' : float(fps)},
              os.path.join(video_dir, HEADER_FILE))

    pixels = np.round(np.clip(frames, 0, 1) * 255).astype(np.uint8)
    for ind, frame in enumerate(pixels):
        with open(os.path.join(video_dir, FRAME_TEMPLATE.format(ind)), 'wb') as f_obj:
            f_obj.write(frame.tobytes())


def load_frames(frames_dir, video_id, indices=None):
    """Load frames of a video from a raw frame archive.

    Parameters
    ----------
    frames_dir : Path or str
        Directory of the archive.
    video_id : str
        Identifier of the video.
    indices : list of int, optional
        Frames to load. If not provided, loads every frame.

    Returns
    -------
    4d array, shape: [n_frames, height, width, 3]
        RGB frames, as float32 values in [0, 1].
    """

    video_dir = os.path.join(frames_dir, video_id)
    header = load_json(os.path.join(video_dir, HEADER_FILE))
    shape = (header['height'], header['width'], 3)

    indices = range(header['num_frames']) if indices is None else indices
    if any(ind < 0 or ind >= header['num_frames'] for ind in indices):
        raise IndexError("Requested frames are outside of video {}.".format(video_id))

    frames = np.zeros((len(indices),) + shape, dtype=np.float32)
    for ind, frame in enumerate(indices):
        with open(os.path.join(video_dir, FRAME_TEMPLATE.format(frame)), 'rb') as f_obj:
            frames[ind] = np.frombuffer(f_obj.read(), dtype=np.uint8).reshape(shape) / 255.

    return frames


class ArchiveFrames():
    """Frame source that reads frames from a split's raw frame archive.

    Parameters
    ----------
    split_dir : Path or str
        Directory of the split, which contains the 'frames' directory.
    """

    def __init__(self, split_dir):
        """Initialize the frame source."""

        self.frames_dir = os.path.join(split_dir, FRAMES_DIR)


    def __call__(self, video, indices):
        """Load the requested frames of a video.

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

        return load_frames(self.frames_dir, video.video_id, indices)


def _write_scene(item, frames_dir):
    """Helper function for rendering and writing one scene, for running in parallel."""

    video_id, scene = item
    write_frames(frames_dir, video_id, render_video(scene), scene.fps)
