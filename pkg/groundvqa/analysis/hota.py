"""Higher order tracking accuracy (HOTA) evaluation of predicted tracks."""

import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment

from groundvqa.core.errors import DataError
from groundvqa.core.boxes import iou_matrix
from groundvqa.core.io import save_json, load_json
from groundvqa.data import TrackSet, HOTAReport

###################################################################################################
###################################################################################################

## Settings & Globals
# IoU thresholds that HOTA is averaged across
ALPHAS = np.linspace(0.05, 0.95, 19)
# Tolerance when comparing IoU values to thresholds
EPS = np.finfo(float).eps

COUNT_KEYS = ('tp', 'fn', 'fp', 'ass_a', 'ass_re', 'ass_pr')
SCORE_KEYS = ('det_a', 'ass_a', 'det_re', 'det_pr', 'ass_re', 'ass_pr', 'hota_alpha')

###################################################################################################
###################################################################################################

def sequence_key(video_id, question):
    """Get the identifier of the sequence for a question about a video."""

    return '{}|{}'.format(video_id, question)


def match_similarity(similarity, alpha, scores=None):
    """Find the one-to-one matching with the most pairs above a threshold.

    Parameters
    ----------
    similarity : 2d array, shape: [n_rows, n_cols]
        Pairwise IoU values. Only pairs with a value of at least `alpha` can match.
    alpha : float
        Matching threshold.
    scores : 2d array, shape: [n_rows, n_cols], optional
        Secondary score to maximize among matchings with the most pairs, with values in
        [0, 1]. Defaults to `similarity`.

    Returns
    -------
    rows, cols : 1d array of int
        Indices of the matched pairs.

    Notes
    -----
    The matching maximizes the number of pairs, and among those the total score.
    Both are maximized at once by an exact assignment on a weight of 1 + score / (k + 1),
    with k the size of the smaller side, since the total score is then below one pair.
    """

    similarity = np.asarray(similarity, dtype=float)
    scores = similarity if scores is None else np.asarray(scores, dtype=float)

    if similarity.size == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)

    valid = similarity >= alpha - EPS
    weight = np.where(valid, 1. + scores / (min(similarity.shape) + 1), 0.)

    rows, cols = linear_sum_assignment(weight, maximize=True)
    keep = valid[rows, cols]

    return rows[keep], cols[keep]


def match_frame(pred_boxes, gt_boxes, alpha):
    """Match predicted and ground truth boxes on one frame.

    Parameters
    ----------
    pred_boxes, gt_boxes : 2d array, shape: [n_boxes, 4]
        Boxes, as (x1, y1, x2, y2).
    alpha : float
        Minimum IoU for a pair of boxes to match.

    Returns
    -------
    list of tuple of (int, int)
        Matched (prediction index, ground truth index) pairs, sorted by prediction index.
        The matching has the most possible pairs, and among those the highest total IoU.

    Examples
    --------
    >>> match_frame([[0, 0, 2, 2]], [[0, 0, 2, 2]], 0.5)
    [(0, 0)]
    """

    pred_boxes = np.asarray(pred_boxes, dtype=float).reshape(-1, 4)
    gt_boxes = np.asarray(gt_boxes, dtype=float).reshape(-1, 4)

    rows, cols = match_similarity(iou_matrix(pred_boxes, gt_boxes), alpha)

    return sorted(zip(rows.tolist(), cols.tolist()))


def alignment_scores(gt_tracks, pred_tracks):
    """Compute how well each pair of tracks is aligned over the whole sequence.

    Parameters
    ----------
    gt_tracks, pred_tracks : list of Tubelet
        Ground truth and predicted tracks.

    Returns
    -------
    alignment : 2d array, shape: [n_gt, n_pred]
        Jaccard index of the co-occurrence of each pair of tracks, with the per-frame
        overlap of each pair normalized against the other boxes on that frame.
    frames : list of tuple
        Per frame: the frame index, ground truth track indices, predicted track indices,
        and the IoU matrix between their boxes.
    """

    gt_counts = np.array([len(track.boxes) for track in gt_tracks], dtype=float)
    pred_counts = np.array([len(track.boxes) for track in pred_tracks], dtype=float)
    potential = np.zeros((len(gt_tracks), len(pred_tracks)))

    frame_inds = sorted({frame for track in gt_tracks + pred_tracks for frame in track.boxes})

    frames = []
    for frame in frame_inds:

        gt_ids = np.array([ind for ind, track in enumerate(gt_tracks) \
            if frame in track.boxes], dtype=int)
        pred_ids = np.array([ind for ind, track in enumerate(pred_tracks) \
            if frame in track.boxes], dtype=int)

        sim = iou_matrix([gt_tracks[ind].boxes[frame] for ind in gt_ids],
                         [pred_tracks[ind].boxes[frame] for ind in pred_ids])

        denom = sim.sum(0)[None, :] + sim.sum(1)[:, None] - sim
        sim_iou = np.divide(sim, denom, out=np.zeros_like(sim), where=denom > EPS)
        potential[gt_ids[:, None], pred_ids[None, :]] += sim_iou

        frames.append((frame, gt_ids, pred_ids, sim))

    alignment = potential / np.maximum(gt_counts[:, None] + pred_counts[None, :] - potential, 1.)

    return alignment, frames


def compute_hota(pred, gt, alphas=ALPHAS):
    """Compute HOTA between predicted and ground truth tracks.

    Parameters
    ----------
    pred : TrackSet
        Predicted tracks.
    gt : TrackSet
        Ground truth tracks.
    alphas : 1d array, optional
        IoU thresholds to evaluate at. Defaults to 0.05, 0.10, ..., 0.95.

    Returns
    -------
    HOTAReport
        Scores per threshold, final HOTA, and a per sequence breakdown.

    Raises
    ------
    DataError
        If object identifiers repeat within a sequence.

    Notes
    -----
    - Per threshold, each frame is matched to get the most true positives, with ties
      resolved by the alignment of the tracks over the sequence, weighted by IoU.
    - DetA = TP / (TP + FN + FP).
    - AssA averages, over true positives, the Jaccard index of the pair's matches
      against both tracks' lengths.
    - HOTA at each threshold is sqrt(DetA * AssA), and the final HOTA their mean.
    - Sequences in only one of the sets are scored as all misses, and flagged.
    - Counts are summed over sequences before computing scores.
    """

    alphas = np.asarray(alphas, dtype=float)
    keys = sorted(set(pred.tracks) | set(gt.tracks))

    flagged = [key for key in keys if (key in pred.tracks) != (key in gt.tracks)]
    if flagged:
        warnings.warn("{} sequence(s) are present in only one track set, and are scored "
                      "as misses: {}.".format(len(flagged), ', '.join(flagged[:5])),
                      stacklevel=2)

    totals = {label : np.zeros(len(alphas)) for label in COUNT_KEYS}
    per_sequence = {}
    for key in keys:

        counts = _sequence_counts(gt.tracks.get(key, []), pred.tracks.get(key, []), alphas, key)
        for label in COUNT_KEYS:
            totals[label] += counts[label]

        seq_scores = _compute_scores(counts)
        per_sequence[key] = {'HOTA' : float(seq_scores['hota_alpha'].mean()),
                             'DetA' : float(seq_scores['det_a'].mean()),
                             'AssA' : float(seq_scores['ass_a'].mean())}

    scores = _compute_scores(totals)

    return HOTAReport(alphas, totals['tp'].astype(int), totals['fn'].astype(int),
                      totals['fp'].astype(int), scores['det_a'], scores['ass_a'],
                      scores['det_re'], scores['det_pr'], scores['ass_re'], scores['ass_pr'],
                      scores['hota_alpha'], float(scores['hota_alpha'].mean()),
                      per_sequence, flagged)


def build_track_sets(samples, predictions):
    """Build the track sets to evaluate from annotated samples and predictions.

    Parameters
    ----------
    samples : list of QASample
        Annotated samples, whose ground truth tracks are evaluated against.
    predictions : list of Prediction
        Predicted tracks.

    Returns
    -------
    pred : TrackSet
        Predicted tracks, keyed by sequence.
    gt : TrackSet
        Ground truth tracks, keyed by sequence.
    """

    gt = TrackSet({sequence_key(sample.video.video_id, sample.question) : \
        list(sample.gt_tracks) for sample in samples}, 'ground_truth')
    pred = TrackSet({sequence_key(prd.video_id, prd.question) : \
        list(prd.tracks) for prd in predictions}, 'prediction')

    return pred, gt


def write_report(report, path, info=None):
    """Write a HOTA report to a JSON file.

    Parameters
    ----------
    report : HOTAReport
        Report to write.
    path : Path or str
        File to write to.
    info : dict, optional
        Extra information to store, such as the configuration hash.
    """

    out = {'HOTA' : report.hota,
           'alphas' : [float(alpha) for alpha in report.alphas],
           'per_alpha' : [{'alpha' : float(report.alphas[ind]),
                           'TP' : int(report.tp[ind]), 'FN' : int(report.fn[ind]),
                           'FP' : int(report.fp[ind]),
                           'DetA' : float(report.det_a[ind]), 'AssA' : float(report.ass_a[ind]),
                           'DetRe' : float(report.det_re[ind]),
                           'DetPr' : float(report.det_pr[ind]),
                           'AssRe' : float(report.ass_re[ind]),
                           'AssPr' : float(report.ass_pr[ind]),
                           'HOTA' : float(report.hota_alpha[ind])} \
                          for ind in range(len(report.alphas))],
           'per_sequence' : report.per_sequence,
           'flagged' : list(report.flagged)}
    if info:
        out['info'] = info

    save_json(out, path)


def read_report(path):
    """Read a HOTA report from a JSON file written by `write_report`.

    Returns
    -------
    HOTAReport
        The report.
    """

    data = load_json(path)
    rows = data['per_alpha']

    def column(label, dtype=float):
        return np.array([row[label] for row in rows], dtype=dtype)

    return HOTAReport(np.array(data['alphas']), column('TP', int), column('FN', int),
                      column('FP', int), column('DetA'), column('AssA'), column('DetRe'),
                      column('DetPr'), column('AssRe'), column('AssPr'), column('HOTA'),
                      data['HOTA'], data['per_sequence'], data['flagged'])


def _check_unique_ids(tracks, key):
    """Check that object identifiers are unique within a sequence."""

    ids = [track.object_id for track in tracks]
    if len(set(ids)) != len(ids):
        raise DataError("Sequence '{}' has repeated object identifiers.".format(key))


def _sequence_counts(gt_tracks, pred_tracks, alphas, key=''):
    """Count matches of one sequence, at each threshold.

    Returns
    -------
    dict of {str : 1d array}
        Per threshold: 'tp', 'fn' and 'fp' counts, and the sums over true positives of
        each pair's association accuracy ('ass_a'), recall ('ass_re') and precision ('ass_pr').
    """

    _check_unique_ids(gt_tracks, key)
    _check_unique_ids(pred_tracks, key)

    n_alphas = len(alphas)
    counts = {label : np.zeros(n_alphas) for label in COUNT_KEYS}

    alignment, frames = alignment_scores(gt_tracks, pred_tracks)
    matches = np.zeros((n_alphas, len(gt_tracks), len(pred_tracks)))

    for _, gt_ids, pred_ids, sim in frames:

        if len(gt_ids) == 0 or len(pred_ids) == 0:
            counts['fn'] += len(gt_ids)
            counts['fp'] += len(pred_ids)
            continue

        scores = alignment[gt_ids[:, None], pred_ids[None, :]] * sim
        for a_ind, alpha in enumerate(alphas):
            rows, cols = match_similarity(sim, alpha, scores)
            counts['tp'][a_ind] += len(rows)
            counts['fn'][a_ind] += len(gt_ids) - len(rows)
            counts['fp'][a_ind] += len(pred_ids) - len(rows)
            matches[a_ind, gt_ids[rows], pred_ids[cols]] += 1

    gt_counts = np.array([len(track.boxes) for track in gt_tracks], dtype=float)[:, None]
    pred_counts = np.array([len(track.boxes) for track in pred_tracks], dtype=float)[None, :]

    for a_ind in range(n_alphas):
        mcount = matches[a_ind]
        denom = np.maximum(gt_counts + pred_counts - mcount, 1.)
        counts['ass_a'][a_ind] = np.sum(mcount * mcount / denom)
        counts['ass_re'][a_ind] = np.sum(mcount * mcount / np.maximum(gt_counts, 1.))
        counts['ass_pr'][a_ind] = np.sum(mcount * mcount / np.maximum(pred_counts, 1.))

    return counts


def _compute_scores(counts):
    """Compute HOTA scores from match counts, per threshold."""

    tp, fn, fp = counts['tp'], counts['fn'], counts['fp']

    det_a = tp / np.maximum(1., tp + fn + fp)
    ass_a = counts['ass_a'] / np.maximum(1., tp)

    return {'det_a' : det_a,
            'ass_a' : ass_a,
            'det_re' : tp / np.maximum(1., tp + fn),
            'det_pr' : tp / np.maximum(1., tp + fp),
            'ass_re' : counts['ass_re'] / np.maximum(1., tp),
            'ass_pr' : counts['ass_pr'] / np.maximum(1., tp),
            'hota_alpha' : np.sqrt(det_a * ass_a)}
