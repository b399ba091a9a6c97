"""Temporal sampling of video frames, and expansion of sparse predictions back to all frames."""

import numpy as np

from groundvqa.core.errors import SamplingError
from groundvqa.data import SamplingConfig, Tubelet, Violation

###################################################################################################
###################################################################################################

def check_sampling_config(cfg):
    """Check that sampling settings are valid.

    Parameters
    ----------
    cfg : SamplingConfig
        Settings to check.

    Raises
    ------
    ValueError
        If any setting is out of its valid range.
    """

    if not cfg.target_fps > 0:
        raise ValueError("The target frame rate must be positive.")
    if cfg.max_sampled_frames < 1:
        raise ValueError("The maximum number of sampled frames must be at least 1.")
    if cfg.duplication_factor is not None and cfg.duplication_factor < 1:
        raise ValueError("The duplication factor must be at least 1.")


def compute_stride(native_fps, target_fps):
    """Compute the frame stride that brings a native frame rate down to a target rate.

    Parameters
    ----------
    native_fps : float
        Native frame rate of the video.
    target_fps : float
        Frame rate to sample at.

    Returns
    -------
    int
        Stride, as native_fps / target_fps rounded half-up, and at least 1.
    """

    return max(1, int(np.floor(native_fps / target_fps + 0.5)))


def get_duplication_factor(cfg, native_fps):
    """Get the duplication factor, deriving it from the stride if it is not set.

    Parameters
    ----------
    cfg : SamplingConfig
        Sampling settings.
    native_fps : float
        Native frame rate of the video.

    Returns
    -------
    int
        Number of frames each sampled prediction covers.
    """

    if cfg.duplication_factor is not None:
        return int(cfg.duplication_factor)

    return compute_stride(native_fps, cfg.target_fps)


def sample_frame_indices(num_frames, native_fps, cfg=SamplingConfig()):
    """Select the frames of a video to pass to the grounding model.

    Parameters
    ----------
    num_frames : int
        Number of frames in the video.
    native_fps : float
        Native frame rate of the video.
    cfg : SamplingConfig, optional
        Sampling settings.

    Returns
    -------
    list of int
        Strictly increasing frame indices, starting at 0.

    Notes
    -----
    Frames are taken every `stride` frames. If this gives more frames than the model
    can process, the selection is uniformly subsampled down to exactly the maximum,
    keeping the first and last selected frames.

    Examples
    --------
    Sample a 30 frame video at 30 fps down to 5 fps:

    >>> sample_frame_indices(30, 30)
    [0, 6, 12, 18, 24]
    """

    if num_frames < 1:
        raise ValueError("A video must have at least one frame.")
    if not native_fps > 0:
        raise ValueError("The native frame rate must be positive.")
    check_sampling_config(cfg)

    stride = compute_stride(native_fps, cfg.target_fps)
    indices = np.arange(0, num_frames, stride)

    if len(indices) > cfg.max_sampled_frames:
        # Spacing of the positions is > 1, so rounding keeps them unique
        positions = np.round(np.linspace(0, len(indices) - 1, cfg.max_sampled_frames))
        indices = indices[positions.astype(int)]

    return [int(ind) for ind in indices]


def expand_predictions(sparse, num_frames, native_fps, cfg=SamplingConfig()):
    """Expand a track predicted on sampled frames to cover every frame of the video.

    Parameters
    ----------
    sparse : Tubelet
        Track with one box per sampled frame.
    num_frames : int
        Number of frames in the video.
    native_fps : float
        Native frame rate of the video.
    cfg : SamplingConfig, optional
        Sampling settings, which must match those used to sample the frames.

    Returns
    -------
    Tubelet
        Track with exactly one box on every frame in [0, num_frames).

    Raises
    ------
    SamplingError
        If the frames of `sparse` are not the frames that would be sampled for this video.

    Notes
    -----
    Each sampled box is copied onto its own frame and the following
    (duplication_factor - 1) frames, truncated at the end of the video.
    Frames left without a box hold the box of the nearest previous sampled frame.
    """

    expected = sample_frame_indices(num_frames, native_fps, cfg)
    if sorted(sparse.boxes) != expected:
        raise SamplingError("Predicted frames do not match the sampling schedule: "
                            "expected {} frames starting {}, got {} frames starting {}.".format(\
                            len(expected), expected[:3], len(sparse.boxes),
                            sorted(sparse.boxes)[:3]))

    factor = get_duplication_factor(cfg, native_fps)

    dense = {}
    for ind in expected:
        for offset in range(factor):
            if ind + offset < num_frames:
                dense[ind + offset] = sparse.boxes[ind]

    # Fill any gaps by holding the previous box
    for frame in range(1, num_frames):
        if frame not in dense:
            dense[frame] = dense[frame - 1]

    return Tubelet(sparse.object_id, {frame : dense[frame] for frame in range(num_frames)},
                   sparse.confidence)


def validate_tubelet(tubelet, video, normalized=False):
    """Check a tubelet against the video it belongs to.

    Parameters
    ----------
    tubelet : Tubelet
        Track to check.
    video : VideoMeta
        Video the track belongs to.
    normalized : bool, optional, default: False
        Whether the boxes are normalized to [0, 1], rather than in pixels.

    Returns
    -------
    list of Violation
        Problems found. The tubelet is valid if and only if the list is empty.
    """

    violations = []
    x_max, y_max = (1., 1.) if normalized else (video.width, video.height)

    for frame, box in sorted(tubelet.boxes.items()):

        if not (isinstance(frame, (int, np.integer)) and 0 <= frame < video.num_frames):
            violations.append(Violation(frame, 'frame_range',
                                        'Frame {} is outside of [0, {}).'.format(\
                                        frame, video.num_frames)))

        if not np.all(np.isfinite(box)):
            violations.append(Violation(frame, 'non_finite',
                                        'Box at frame {} has non-finite values.'.format(frame)))
            continue

        if not (box[2] > box[0] and box[3] > box[1]):
            violations.append(Violation(frame, 'degenerate',
                                        'Box at frame {} is degenerate: {}.'.format(\
                                        frame, tuple(box))))

        if box[0] < 0 or box[1] < 0 or box[2] > x_max or box[3] > y_max:
            violations.append(Violation(frame, 'out_of_bounds',
                                        'Box at frame {} is outside the frame: {}.'.format(\
                                        frame, tuple(box))))

    return violations
