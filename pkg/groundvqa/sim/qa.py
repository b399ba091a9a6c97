"""Deriving ordinal tracking questions, with answers and ground truth, from scenes."""

from groundvqa.data import Tubelet, VideoMeta, QASample
from groundvqa.sim.scene import COLORS, SHAPES
from groundvqa.sim.render import object_box

###################################################################################################
###################################################################################################

ORDINALS = ('first', 'second', 'third', 'fourth', 'fifth', 'sixth')
QUESTION_TEMPLATE = 'track the {ordinal} {color} {shape} that appears'
ANSWER_TEMPLATE = '{color} {shape}'

###################################################################################################
###################################################################################################

def scene_video(scene, video_id=None):
    """Get the video meta data of a scene.

    Parameters
    ----------
    scene : SceneSpec
        Scene to describe.
    video_id : str, optional
        Identifier to give the video. Defaults to one derived from the scene seed.

    Returns
    -------
    VideoMeta
        Meta data of the scene's video.
    """

    return VideoMeta(video_id if video_id else 'scene_{}'.format(scene.seed),
                     scene.num_frames, scene.fps, scene.width, scene.height)


def object_tubelet(scene, obj_ind):
    """Get the ground truth track of an object in a scene.

    Parameters
    ----------
    scene : SceneSpec
        Scene the object is in.
    obj_ind : int
        Index of the object in the scene's object list.

    Returns
    -------
    Tubelet
        Analytic boxes of the object from its appearance to the end of the scene.
    """

    obj = scene.objects[obj_ind]

    return Tubelet('obj{}'.format(obj_ind),
                   {frame : object_box(obj, frame) \
                       for frame in range(obj.appearance_frame, scene.num_frames)})


def derive_qa(scene, video_id=None):
    """Derive ordinal tracking questions for a scene.

    Parameters
    ----------
    scene : SceneSpec
        Scene to ask questions about.
    video_id : str, optional
        Identifier to give the video.

    Returns
    -------
    list of QASample
        One question per instance of each (color, shape) class in the scene.

    Notes
    -----
    For a class with n instances, the k-th question asks to track the k-th instance
    to appear, for k in 1..n. Instances appearing on the same frame are ordered by
    their index in the object list. Classes are visited in order of first appearance.
    """

    video = scene_video(scene, video_id)

    order = sorted(range(len(scene.objects)),
                   key=lambda ind: (scene.objects[ind].appearance_frame, ind))

    classes = {}
    for ind in order:
        obj = scene.objects[ind]
        classes.setdefault((obj.color, obj.shape), []).append(ind)

    samples = []
    for (color, shape), instances in classes.items():
        for k_ind, obj_ind in enumerate(instances):
            question = QUESTION_TEMPLATE.format(ordinal=ORDINALS[k_ind],
                                                color=color, shape=shape)
            answer = ANSWER_TEMPLATE.format(color=color, shape=shape)
            samples.append(QASample(video, question, answer, [object_tubelet(scene, obj_ind)]))

    return samples


def answer_vocabulary():
    """Get every answer that synthetic questions can have.

    Returns
    -------
    list of str
        Answers, as '<color> <shape>' for every color and shape.
    """

    return [ANSWER_TEMPLATE.format(color=color, shape=shape) \
        for color in COLORS for shape in SHAPES]
