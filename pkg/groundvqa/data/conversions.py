"""Conversion functions for organizing results into alternate representations."""

from groundvqa.core.modutils import safe_import, check_dependency

pd = safe_import('pandas')

###################################################################################################
###################################################################################################

def report_to_dict(report):
    """Convert the per-threshold scores of a HOTA report to a dictionary.

    Parameters
    ----------
    report : HOTAReport
        Evaluation results.

    Returns
    -------
    dict of {str : list}
        Columns of scores, with one entry per threshold.
    """

    return {'alpha' : list(report.alphas),
            'TP' : list(report.tp),
            'FN' : list(report.fn),
            'FP' : list(report.fp),
            'DetA' : list(report.det_a),
            'AssA' : list(report.ass_a),
            'DetRe' : list(report.det_re),
            'DetPr' : list(report.det_pr),
            'AssRe' : list(report.ass_re),
            'AssPr' : list(report.ass_pr),
            'HOTA' : list(report.hota_alpha)}


@check_dependency(pd, 'pandas')
def report_to_dataframe(report):
    """Convert the per-threshold scores of a HOTA report to a dataframe.

    Parameters
    ----------
    report : HOTAReport
        Evaluation results.

    Returns
    -------
    pd.DataFrame
        Scores, with one row per threshold.
    """

    return pd.DataFrame(report_to_dict(report))


@check_dependency(pd, 'pandas')
def sequences_to_dataframe(report):
    """Convert the per sequence scores of a HOTA report to a dataframe.

    Parameters
    ----------
    report : HOTAReport
        Evaluation results.

    Returns
    -------
    pd.DataFrame
        Scores, with one row per sequence, and a column marking flagged sequences.
    """

    df = pd.DataFrame.from_dict(report.per_sequence, orient='index')
    df['flagged'] = [key in report.flagged for key in df.index]

    return df


@check_dependency(pd, 'pandas')
def samples_to_dataframe(samples):
    """Convert a list of samples to a dataframe.

    Parameters
    ----------
    samples : list of QASample
        Samples to convert.

    Returns
    -------
    pd.DataFrame
        One row per sample, with the video, question, answer and track lengths.
    """

    return pd.DataFrame([{'video_id' : sample.video.video_id,
                          'num_frames' : sample.video.num_frames,
                          'question' : sample.question,
                          'answer' : sample.answer,
                          'n_tracks' : len(sample.gt_tracks),
                          'track_frames' : sum(len(track.boxes) for track in sample.gt_tracks)} \
                         for sample in samples])
