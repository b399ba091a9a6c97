"""Formatted strings for printing out settings, dataset and evaluation information."""

from groundvqa.version import __version__ as MODULE_VERSION

###################################################################################################
###################################################################################################

## Settings & Globals
# Centering Value - Long & Short options
LCV = 98
SCV = 70

###################################################################################################
###################################################################################################

def gen_version_str(concise=False):
    """Generate a string representation of the current version of the module.

    Parameters
    ----------
    concise : bool, optional, default: False
        Whether to print the report in concise mode.

    Returns
    -------
    output : str
        Formatted string of current version.
    """

    str_lst = [
        '=',
        '',
        'GroundVQA - VERSION',
        '',
        '{}'.format(MODULE_VERSION),
        '',
        '='
    ]

    return _format(str_lst, concise)


def gen_settings_str(settings, title='SETTINGS', concise=False):
    """Generate a string representation of a group of settings.

    Parameters
    ----------
    settings : dict of {str : NamedTuple}
        Settings objects, keyed by a label for each group.
    title : str, optional, default: 'SETTINGS'
        Title of the report.
    concise : bool, optional, default: False
        Whether to print the report in concise mode.

    Returns
    -------
    output : str
        Formatted string of the settings.
    """

    str_lst = ['=', '', 'GroundVQA - {}'.format(title.upper()), '']

    for label, values in settings.items():
        str_lst.append('{}'.format(label))
        str_lst.extend('{} : {}'.format(field, value) \
            for field, value in values._asdict().items())
        str_lst.append('')

    str_lst.append('=')

    return _format(str_lst, concise)


def gen_split_summary_str(split, samples, concise=False):
    """Generate a string representation of a dataset split.

    Parameters
    ----------
    split : DatasetSplitSpec
        Definition of the split.
    samples : list of QASample
        Samples of the split.
    concise : bool, optional, default: False
        Whether to print the report in concise mode.

    Returns
    -------
    output : str
        Formatted string of the split summary.
    """

    videos = {sample.video.video_id : sample.video for sample in samples}
    n_frames = [video.num_frames for video in videos.values()]
    n_answered = sum(sample.answer is not None for sample in samples)

    str_lst = [
        '=',
        '',
        'GroundVQA - DATASET SPLIT: {}'.format(split.name.upper()),
        '',
        'Seed : {}'.format(split.seed),
        '{} samples over {} videos'.format(len(samples), len(videos)),
        'Frames per video : {} - {}'.format(min(n_frames), max(n_frames)) if n_frames else \
            'Frames per video : -',
        'Samples with answers : {}'.format(n_answered),
        '',
        '='
    ]

    return _format(str_lst, concise)


def gen_hota_report_str(report, concise=False):
    """Generate a string representation of a HOTA evaluation.

    Parameters
    ----------
    report : HOTAReport
        Evaluation results.
    concise : bool, optional, default: False
        Whether to print the report in concise mode.

    Returns
    -------
    output : str
        Formatted string of the evaluation.
    """

    n_alphas = len(report.alphas)

    str_lst = [
        '=',
        '',
        'GroundVQA - HOTA EVALUATION',
        '',
        'HOTA : {:1.4f}'.format(report.hota),
        'DetA : {:1.4f}, AssA : {:1.4f}  (mean over {} thresholds)'.format(\
            report.det_a.mean() if n_alphas else 0., report.ass_a.mean() if n_alphas else 0.,
            n_alphas),
        '',
        'alpha      TP      FN      FP    DetA    AssA    HOTA',
        *['{:5.2f} {:7d} {:7d} {:7d} {:7.4f} {:7.4f} {:7.4f}'.format(\
            report.alphas[ind], report.tp[ind], report.fn[ind], report.fp[ind],
            report.det_a[ind], report.ass_a[ind], report.hota_alpha[ind]) \
            for ind in range(n_alphas)],
        '',
        '{} sequences evaluated, {} flagged as missing from one set'.format(\
            len(report.per_sequence), len(report.flagged)),
        '',
        '='
    ]

    return _format(str_lst, concise)


def _format(str_lst, concise):
    """Format a string for printing.

    Parameters
    ----------
    str_lst : list of str
        List containing all elements for the string, each element representing a line.
    concise : bool, optional, default: False
        Whether to print the report in a concise mode, or not.

    Returns
    -------
    output : str
        Formatted string, ready for printing.
    """

    center_val = SCV if concise else LCV

    str_lst[0] = str_lst[0] * center_val
    str_lst[-1] = str_lst[-1] * center_val

    str_lst = list(filter(lambda x: x != '', str_lst)) if concise else str_lst

    return '\n'.join([string.center(center_val) for string in str_lst])
