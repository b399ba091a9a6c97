"""Training objective of the grounding network."""

import torch
import torch.nn.functional as F

###################################################################################################
###################################################################################################

def box_cxcywh_to_xyxy(boxes):
    """Convert center boxes (cx, cy, w, h) to corner boxes (x1, y1, x2, y2)."""

    cx, cy, wd, ht = boxes.unbind(-1)

    return torch.stack([cx - wd / 2, cy - ht / 2, cx + wd / 2, cy + ht / 2], dim=-1)


def paired_generalized_iou(boxes_a, boxes_b):
    """Compute generalized IoU between aligned pairs of corner boxes.

    Parameters
    ----------
    boxes_a, boxes_b : Tensor, shape: [n, 4]
        Boxes, as (x1, y1, x2, y2), with positive area.

    Returns
    -------
    Tensor, shape: [n]
        Generalized IoU of each pair, in [-1, 1].
    """

    area_a = (boxes_a[:, 2] - boxes_a[:, 0]) * (boxes_a[:, 3] - boxes_a[:, 1])
    area_b = (boxes_b[:, 2] - boxes_b[:, 0]) * (boxes_b[:, 3] - boxes_b[:, 1])

    top_left = torch.max(boxes_a[:, :2], boxes_b[:, :2])
    bottom_right = torch.min(boxes_a[:, 2:], boxes_b[:, 2:])
    inter = (bottom_right - top_left).clamp(min=0).prod(-1)
    union = area_a + area_b - inter

    enc_top_left = torch.min(boxes_a[:, :2], boxes_b[:, :2])
    enc_bottom_right = torch.max(boxes_a[:, 2:], boxes_b[:, 2:])
    enclosure = (enc_bottom_right - enc_top_left).clamp(min=0).prod(-1)

    return inter / union - (enclosure - union) / enclosure


def grounding_loss(pred_boxes, pred_conf, gt_boxes, visible, mask=None,
                   lambda_l1=5., lambda_giou=2., lambda_conf=1.):
    """Compute the grounding loss of predicted boxes against ground truth.

    Parameters
    ----------
    pred_boxes : Tensor, shape: [..., 4]
        Predicted normalized boxes, as (cx, cy, w, h).
    pred_conf : Tensor, shape: [...]
        Predicted visibility confidences, in [0, 1].
    gt_boxes : Tensor, shape: [..., 4]
        Ground truth normalized boxes, as (cx, cy, w, h). Ignored where not visible.
    visible : Tensor of bool, shape: [...]
        Whether the object is visible on each frame.
    mask : Tensor of bool, shape: [...], optional
        True for padded frames, which are ignored.
    lambda_l1, lambda_giou, lambda_conf : float, optional, default: 5, 2, 1
        Weights of the loss terms.

    Returns
    -------
    total : Tensor
        Weighted sum of the loss terms, as a scalar.
    terms : dict of {str : Tensor}
        The unweighted 'l1', 'giou' and 'conf' terms.

    Notes
    -----
    - l1: mean over visible frames of the summed absolute error of (cx, cy, w, h).
    - giou: mean over visible frames of (1 - generalized IoU).
    - conf: mean over non-padded frames of the binary cross-entropy of the confidence
      against visibility.
    The box terms are zero if no frame is visible.
    """

    valid = torch.ones_like(visible, dtype=torch.bool) if mask is None else ~mask
    boxes_on = visible & valid

    pred_on = pred_boxes[boxes_on]
    gt_on = gt_boxes[boxes_on]

    if pred_on.shape[0] > 0:
        l1 = (pred_on - gt_on).abs().sum(-1).mean()
        giou = (1 - paired_generalized_iou(box_cxcywh_to_xyxy(pred_on),
                                           box_cxcywh_to_xyxy(gt_on))).mean()
    else:
        l1 = pred_boxes.sum() * 0.
        giou = pred_boxes.sum() * 0.

    conf = F.binary_cross_entropy(pred_conf[valid], boxes_on[valid].to(pred_conf.dtype))

    total = lambda_l1 * l1 + lambda_giou * giou + lambda_conf * conf

    return total, {'l1' : l1, 'giou' : giou, 'conf' : conf}
