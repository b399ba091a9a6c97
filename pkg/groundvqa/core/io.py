"""File I/O: annotations, predictions, generic JSON and parameter checkpoints."""

import os
import json
import struct
from json import JSONDecodeError

import numpy as np

from groundvqa.core.errors import DataError, AnnotationError, OutputExistsError
from groundvqa.core.sampling import validate_tubelet
from groundvqa.data import BoundingBox, Tubelet, VideoMeta, QASample, Prediction

###################################################################################################
###################################################################################################

## Settings & Globals
# Number of decimals that box coordinates are stored with
COORD_DECIMALS = 4
# Leading bytes of a parameter checkpoint file
CKPT_MAGIC = b'GVQACKPT'
CKPT_TAGS = ('raw', 'ema')

VIDEO_FIELDS = ('video_id', 'num_frames', 'native_fps', 'width', 'height')

###################################################################################################
###################################################################################################

def fname(file_name, extension):
    """Check a filename, adding an extension if not already specified.

    Parameters
    ----------
    file_name : str
        String that specifies a file name.
    extension : str
        String of the extension (without a period) to be added if one isn't already present.

    Returns
    -------
    file_name : str
        String that specifies a file name.
    """

    if not os.path.splitext(str(file_name))[1]:
        file_name = str(file_name) + '.' + extension

    return file_name


def fpath(file_path, file_name):
    """Build the full file path from file name and directory.

    Parameters
    ----------
    file_path : Path or str or None
        Path to the directory where the file is located.
    file_name : str
        Name of the file.

    Returns
    -------
    full_path : str
        Full file path to the file, including directory, if provided.
    """

    if not file_path:
        full_path = str(file_name)
    else:
        full_path = os.path.join(file_path, file_name)

    return full_path


def check_output(path, force=False):
    """Check that an output path is free to be written to.

    Parameters
    ----------
    path : Path or str
        Output file or directory.
    force : bool, optional, default: False
        Whether existing outputs may be overwritten.

    Raises
    ------
    OutputExistsError
        If the output exists and `force` is not set.
    """

    if os.path.exists(path) and not force:
        raise OutputExistsError("Output {} already exists: use force to overwrite.".format(path))


def save_json(obj, path):
    """Save an object to a JSON file, with a deterministic layout.

    Parameters
    ----------
    obj : dict
        Object to save.
    path : Path or str
        File to save to.
    """

    with open(path, 'w') as outfile:
        json.dump(obj, outfile, indent=1)
        outfile.write('\n')


def load_json(path):
    """Load a JSON file.

    Parameters
    ----------
    path : Path or str
        File to load.

    Returns
    -------
    dict
        Loaded object.

    Raises
    ------
    AnnotationError
        If the file is not valid JSON. The message gives the line and column.
    """

    with open(path, 'r') as infile:
        try:
            return json.load(infile)
        except JSONDecodeError as excp:
            raise AnnotationError("Malformed JSON in {} at line {}, column {}: {}.".format(\
                path, excp.lineno, excp.colno, excp.msg)) from excp

## Annotations & predictions

def box_to_list(box):
    """Convert a box to a list of coordinates, rounded to the stored precision."""

    return [round(float(val), COORD_DECIMALS) for val in box]


def tubelet_to_dict(tubelet, include_confidence=False):
    """Convert a tubelet to a JSON serializable dictionary.

    Parameters
    ----------
    tubelet : Tubelet
        Track to convert.
    include_confidence : bool, optional, default: False
        Whether to include the track confidence.

    Returns
    -------
    dict
        Track, with boxes keyed by frame index as a string.
    """

    out = {'object_id' : str(tubelet.object_id)}
    if include_confidence:
        out['confidence'] = None if tubelet.confidence is None \
            else round(float(tubelet.confidence), 6)
    out['boxes'] = {str(frame) : box_to_list(tubelet.boxes[frame]) for frame in tubelet.frames}

    return out


def write_annotations(path, samples, include_answers=True, info=None):
    """Write question samples to an annotation file.

    Parameters
    ----------
    path : Path or str
        File to write to.
    samples : list of QASample
        Samples to write.
    include_answers : bool, optional, default: True
        Whether to write answers. Splits without answers are written with this set to False.
    info : dict, optional
        Extra information to store with the annotations, such as the config hash.
    """

    videos = {}
    for sample in samples:
        videos.setdefault(sample.video.video_id, sample.video)

    out = {}
    if info:
        out['info'] = info
    out['videos'] = [{field : getattr(video, field) for field in VIDEO_FIELDS} \
        for video in videos.values()]

    out['samples'] = []
    for sample in samples:
        sample_dict = {'video_id' : sample.video.video_id, 'question' : sample.question}
        if include_answers and sample.answer is not None:
            sample_dict['answer'] = sample.answer
        sample_dict['gt_tracks'] = [tubelet_to_dict(track) for track in sample.gt_tracks]
        out['samples'].append(sample_dict)

    save_json(out, path)


def read_annotations(path):
    """Read question samples from an annotation file.

    Parameters
    ----------
    path : Path or str
        File to read.

    Returns
    -------
    list of QASample
        Samples in the file, in file order.

    Raises
    ------
    AnnotationError
        If the file is malformed, is missing fields, has invalid tracks,
        or has duplicate (video_id, question) keys.
    """

    data = load_json(path)
    videos = _parse_videos(data)

    samples, seen = [], set()
    for ind, sample_dict in enumerate(_get_field(data, 'samples', 'file', list)):

        where = 'samples[{}]'.format(ind)
        video_id = _get_field(sample_dict, 'video_id', where, str)
        if video_id not in videos:
            raise AnnotationError("{}: unknown video_id '{}'.".format(where, video_id))

        question = _get_field(sample_dict, 'question', where, str)
        if not question:
            raise AnnotationError("{}: field 'question' is empty.".format(where))
        if (video_id, question) in seen:
            raise AnnotationError("{}: duplicate sample for video '{}' and question '{}'.".format(\
                where, video_id, question))
        seen.add((video_id, question))

        answer = sample_dict.get('answer')
        if answer is not None and not isinstance(answer, str):
            raise AnnotationError("{}: field 'answer' must be a string.".format(where))

        tracks = [_parse_tubelet(track, '{}.gt_tracks[{}]'.format(where, t_ind)) \
            for t_ind, track in enumerate(_get_field(sample_dict, 'gt_tracks', where, list))]

        for t_ind, track in enumerate(tracks):
            violations = validate_tubelet(track, videos[video_id])
            if violations:
                raise AnnotationError("{}.gt_tracks[{}]: {}".format(\
                    where, t_ind, violations[0].message))

        samples.append(QASample(videos[video_id], question, answer, tracks))

    return samples


def read_annotation_info(path):
    """Read the info block of an annotation or prediction file.

    Parameters
    ----------
    path : Path or str
        File to read.

    Returns
    -------
    dict
        Info block, or an empty dictionary if there is none.
    """

    return load_json(path).get('info', {})


def write_predictions(path, predictions, videos=None, info=None):
    """Write predicted tracks to a prediction file.

    Parameters
    ----------
    path : Path or str
        File to write to.
    predictions : list of Prediction
        Predictions to write.
    videos : list of VideoMeta, optional
        Meta data of the predicted videos, to store alongside the predictions.
    info : dict, optional
        Extra information to store with the predictions, such as the config hash.
    """

    out = {}
    if info:
        out['info'] = info
    if videos:
        out['videos'] = [{field : getattr(video, field) for field in VIDEO_FIELDS} \
            for video in videos]

    out['samples'] = []
    for pred in predictions:
        pred_dict = {'video_id' : pred.video_id, 'question' : pred.question}
        if pred.answer is not None:
            pred_dict['answer'] = pred.answer
        pred_dict['tracks'] = [tubelet_to_dict(track, True) for track in pred.tracks]
        out['samples'].append(pred_dict)

    save_json(out, path)


def read_predictions(path):
    """Read predicted tracks from a prediction file.

    Parameters
    ----------
    path : Path or str
        File to read.

    Returns
    -------
    list of Prediction
        Predictions in the file.

    Notes
    -----
    Annotation files can also be read as predictions: if a sample has no 'tracks'
    field, its 'gt_tracks' are used, with a confidence of 1.
    """

    data = load_json(path)

    predictions = []
    for ind, pred_dict in enumerate(_get_field(data, 'samples', 'file', list)):

        where = 'samples[{}]'.format(ind)
        video_id = _get_field(pred_dict, 'video_id', where, str)
        question = _get_field(pred_dict, 'question', where, str)

        if 'tracks' in pred_dict:
            tracks = [_parse_tubelet(track, '{}.tracks[{}]'.format(where, t_ind)) \
                for t_ind, track in enumerate(_get_field(pred_dict, 'tracks', where, list))]
        else:
            tracks = [_parse_tubelet(track, '{}.gt_tracks[{}]'.format(where, t_ind))._replace(\
                confidence=1.0) for t_ind, track in \
                enumerate(_get_field(pred_dict, 'gt_tracks', where, list))]

        predictions.append(Prediction(video_id, question, pred_dict.get('answer'), tracks))

    return predictions

## Checkpoints

def save_checkpoint(path, params, config_hash, step, tag='raw'):
    """Save a flat parameter vector to a checkpoint file.

    Parameters
    ----------
    path : Path or str
        File to save to.
    params : 1d array
        Parameter vector. Stored as little-endian 32-bit floats.
    config_hash : str
        Hash of the configuration the parameters belong to.
    step : int
        Number of optimizer (or averaging) steps the parameters are at.
    tag : {'raw', 'ema'}
        Whether the parameters are the trained or the averaged parameters.

    Notes
    -----
    The file layout is: magic bytes, a little-endian uint32 header length,
    a JSON header (tag, config hash, parameter count, step), then the parameters.
    """

    if tag not in CKPT_TAGS:
        raise ValueError("Checkpoint tag {} not understood.".format(tag))

    params = np.asarray(params).ravel().astype('<f4')
    header = json.dumps({'tag' : tag, 'config_hash' : config_hash,
                         'num_params' : int(params.size), 'step' : int(step)},
                        sort_keys=True).encode('utf-8')

    with open(path, 'wb') as f_obj:
        f_obj.write(CKPT_MAGIC)
        f_obj.write(struct.pack('<I', len(header)))
        f_obj.write(header)
        f_obj.write(params.tobytes())


def load_checkpoint(path):
    """Load a flat parameter vector from a checkpoint file.

    Parameters
    ----------
    path : Path or str
        File to load.

    Returns
    -------
    params : 1d array
        Parameter vector, as 32-bit floats.
    header : dict
        Checkpoint header, with keys 'tag', 'config_hash', 'num_params' and 'step'.

    Raises
    ------
    DataError
        If the file is not a checkpoint, or its contents are inconsistent with its header.
    """

    with open(path, 'rb') as f_obj:
        contents = f_obj.read()

    if not contents.startswith(CKPT_MAGIC):
        raise DataError("File {} is not a checkpoint.".format(path))

    offset = len(CKPT_MAGIC)
    header_len = struct.unpack('<I', contents[offset:offset + 4])[0]
    offset += 4
    header = json.loads(contents[offset:offset + header_len].decode('utf-8'))
    params = np.frombuffer(contents[offset + header_len:], dtype='<f4').copy()

    if params.size != header['num_params']:
        raise DataError("Checkpoint {} holds {} parameters, header says {}.".format(\
            path, params.size, header['num_params']))

    return params, header

## Helpers

def _get_field(obj, field, where, kind):
    """Get a required field of a JSON object, checking its type."""

    if not isinstance(obj, dict):
        raise AnnotationError("{}: expected an object.".format(where))
    if field not in obj:
        raise AnnotationError("{}: missing field '{}'.".format(where, field))
    if not isinstance(obj[field], kind):
        kinds = kind if isinstance(kind, tuple) else (kind,)
        raise AnnotationError("{}: field '{}' must be of type {}.".format(\
            where, field, ' or '.join(knd.__name__ for knd in kinds)))

    return obj[field]


def _parse_videos(data):
    """Parse the video meta data block of an annotation file."""

    videos = {}
    for ind, video_dict in enumerate(_get_field(data, 'videos', 'file', list)):
        where = 'videos[{}]'.format(ind)
        video = VideoMeta(_get_field(video_dict, 'video_id', where, str),
                          _get_field(video_dict, 'num_frames', where, int),
                          _get_field(video_dict, 'native_fps', where, (int, float)),
                          _get_field(video_dict, 'width', where, int),
                          _get_field(video_dict, 'height', where, int))
        if video.num_frames < 1 or not video.native_fps > 0 or \
            video.width < 1 or video.height < 1:
            raise AnnotationError("{}: invalid video meta data {}.".format(where, tuple(video)))
        if video.video_id in videos:
            raise AnnotationError("{}: duplicate video_id '{}'.".format(where, video.video_id))
        videos[video.video_id] = video

    return videos


def _parse_tubelet(track_dict, where):
    """Parse one track of an annotation or prediction file."""

    object_id = _get_field(track_dict, 'object_id', where, str)
    confidence = track_dict.get('confidence')

    boxes = {}
    for key, coords in _get_field(track_dict, 'boxes', where, dict).items():
        try:
            frame = int(key)
        except ValueError as excp:
            raise AnnotationError("{}: frame key '{}' is not an integer.".format(\
                where, key)) from excp
        if not (isinstance(coords, list) and len(coords) == 4 and \
            all(isinstance(val, (int, float)) for val in coords)):
            raise AnnotationError("{}: box at frame {} must be 4 numbers.".format(where, key))
        boxes[frame] = BoundingBox(*[float(val) for val in coords])

    return Tubelet(object_id, dict(sorted(boxes.items())), confidence)
