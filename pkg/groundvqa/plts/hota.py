"""Plots for visualizing evaluation and training results."""

from groundvqa.core.modutils import safe_import, check_dependency
from groundvqa.plts.settings import PLT_FIGSIZES, PLT_COLORS, HOTA_CURVES
from groundvqa.plts.utils import check_ax, savefig

plt = safe_import('.pyplot', 'matplotlib')

###################################################################################################
###################################################################################################

@savefig
@check_dependency(plt, 'matplotlib')
def plot_hota_curves(report, ax=None, **plot_kwargs):
    """Plot HOTA, DetA and AssA across IoU thresholds.

    Parameters
    ----------
    report : HOTAReport
        Evaluation results.
    ax : matplotlib.Axes, optional
        Figure axes upon which to plot.
    **plot_kwargs
        Additional keyword arguments passed to the plot calls.
    """

    ax = check_ax(ax, plot_kwargs.pop('figsize', PLT_FIGSIZES['curves']))

    curves = {'HOTA' : report.hota_alpha, 'DetA' : report.det_a, 'AssA' : report.ass_a}
    for label in HOTA_CURVES:
        ax.plot(report.alphas, curves[label], color=PLT_COLORS[label], label=label,
                **plot_kwargs)

    ax.set_xlabel('IoU threshold (alpha)')
    ax.set_ylabel('Score')
    ax.set_ylim(0, 1.05)
    ax.set_title('HOTA = {:1.4f}'.format(report.hota))
    ax.legend()


@savefig
@check_dependency(plt, 'matplotlib')
def plot_training_history(history, ax=None, **plot_kwargs):
    """Plot the per-epoch training loss of a model state.

    Parameters
    ----------
    history : list of float
        Mean loss of each epoch.
    ax : matplotlib.Axes, optional
        Figure axes upon which to plot.
    **plot_kwargs
        Additional keyword arguments passed to the plot call.
    """

    ax = check_ax(ax, plot_kwargs.pop('figsize', PLT_FIGSIZES['history']))

    ax.plot(range(1, len(history) + 1), history, marker='o', **plot_kwargs)
    ax.set_xlabel('Epoch')
    ax.set_ylabel('Loss')
