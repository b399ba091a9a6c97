"""Plots for visualizing tracks on video frames."""

from groundvqa.core.modutils import safe_import, check_dependency
from groundvqa.plts.settings import PLT_FIGSIZES, PLT_COLORS
from groundvqa.plts.utils import check_ax, savefig

plt = safe_import('.pyplot', 'matplotlib')
patches = safe_import('.patches', 'matplotlib')

###################################################################################################
###################################################################################################

@savefig
@check_dependency(plt, 'matplotlib')
def plot_tubelet(frame, frame_index, gt_tracks=None, pred_tracks=None, ax=None, **plot_kwargs):
    """Plot ground truth and predicted boxes on a video frame.

    Parameters
    ----------
    frame : 3d array, shape: [height, width, 3]
        RGB frame, with values in [0, 1].
    frame_index : int
        Index of the frame in the video, to get the boxes of.
    gt_tracks, pred_tracks : list of Tubelet, optional
        Ground truth and predicted tracks. Tracks without a box on the frame are skipped.
    ax : matplotlib.Axes, optional
        Figure axes upon which to plot.
    **plot_kwargs
        Additional plot related keyword arguments: 'figsize' and 'linewidth'.
    """

    ax = check_ax(ax, plot_kwargs.pop('figsize', PLT_FIGSIZES['frame']))

    linewidth = plot_kwargs.pop('linewidth', 2)

    ax.imshow(frame, origin='upper')

    for tracks, label in [(gt_tracks or [], 'gt'), (pred_tracks or [], 'pred')]:
        for track in tracks:
            if frame_index not in track.boxes:
                continue
            box = track.boxes[frame_index]
            ax.add_patch(patches.Rectangle((box.x1, box.y1), box.width, box.height,
                                           fill=False, edgecolor=PLT_COLORS[label],
                                           linewidth=linewidth))
            ax.text(box.x1, box.y1, '{} {}'.format(label, track.object_id),
                    color=PLT_COLORS[label], fontsize=8, va='bottom')

    ax.set_title('Frame {}'.format(frame_index))
    ax.set_xticks([])
    ax.set_yticks([])
