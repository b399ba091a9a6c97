"""Tests for groundvqa.nets.losses."""

import numpy as np
import torch
from pytest import approx

from groundvqa.core.boxes import giou

from groundvqa.nets.losses import *

###################################################################################################
###################################################################################################

def test_box_cxcywh_to_xyxy():

    out = box_cxcywh_to_xyxy(torch.tensor([[0.5, 0.5, 0.2, 0.4]]))
    assert torch.allclose(out, torch.tensor([[0.4, 0.3, 0.6, 0.7]]))

def test_paired_generalized_iou():

    # Unit boxes at opposite corners of their enclosure
    boxes_a = torch.tensor([[0., 0., 1., 1.]], dtype=torch.float64)
    boxes_b = torch.tensor([[2., 2., 3., 3.]], dtype=torch.float64)
    assert paired_generalized_iou(boxes_a, boxes_b).item() == approx(-7 / 9)

    rng = np.random.default_rng(0)
    for _ in range(10):
        box_a = np.concatenate([rng.uniform(0, 5, 2), rng.uniform(6, 10, 2)])
        box_b = np.concatenate([rng.uniform(0, 5, 2), rng.uniform(6, 10, 2)])
        out = paired_generalized_iou(torch.tensor(np.array([box_a])),
                                     torch.tensor(np.array([box_b])))
        assert out.item() == approx(giou(box_a, box_b))

def test_grounding_loss_perfect():

    boxes = torch.tensor([[0.5, 0.5, 0.2, 0.2], [0.3, 0.6, 0.1, 0.3]], dtype=torch.float64)
    visible = torch.tensor([True, False])

    # Confidences clamped just inside (0, 1), as the sigmoid head can not reach 0 or 1
    conf = torch.tensor([1 - 1e-9, 1e-9], dtype=torch.float64)
    total, terms = grounding_loss(boxes, conf, boxes, visible)

    assert terms['l1'].item() == 0.
    assert terms['giou'].item() == approx(0., abs=1e-12)
    assert terms['conf'].item() <= 1e-6
    assert total.item() <= 1e-6

def test_grounding_loss_terms():

    pred = torch.tensor([[0.5, 0.5, 0.2, 0.2], [0.5, 0.5, 0.2, 0.2]], dtype=torch.float64)
    gt = torch.tensor([[0.6, 0.5, 0.2, 0.2], [0.1, 0.1, 0.1, 0.1]], dtype=torch.float64)
    conf = torch.tensor([0.5, 0.5], dtype=torch.float64)
    visible = torch.tensor([True, False])

    total, terms = grounding_loss(pred, conf, gt, visible, lambda_l1=5., lambda_giou=2.,
                                  lambda_conf=1.)

    # Only the visible frame enters the box terms
    expected_giou = 1 - giou([0.4, 0.4, 0.6, 0.6], [0.5, 0.4, 0.7, 0.6])
    assert terms['l1'].item() == approx(0.1)
    assert terms['giou'].item() == approx(expected_giou)
    assert terms['conf'].item() == approx(np.log(2))
    assert total.item() == approx(5 * 0.1 + 2 * expected_giou + np.log(2))

def test_grounding_loss_nothing_visible():

    pred = torch.rand(3, 4, dtype=torch.float64, requires_grad=True)
    conf = torch.full((3,), 0.25, dtype=torch.float64)
    total, terms = grounding_loss(pred, conf, torch.rand(3, 4, dtype=torch.float64),
                                  torch.zeros(3, dtype=torch.bool))

    assert terms['l1'].item() == 0.
    assert terms['giou'].item() == 0.
    assert terms['conf'].item() == approx(-np.log(0.75))

    # Still differentiable, with zero box gradients
    total.backward()
    assert torch.all(pred.grad == 0)

def test_grounding_loss_mask():

    pred = torch.tensor([[[0.5, 0.5, 0.2, 0.2], [0.5, 0.5, 0.2, 0.2]]], dtype=torch.float64)
    gt = torch.tensor([[[0.5, 0.5, 0.2, 0.2], [0.9, 0.9, 0.1, 0.1]]], dtype=torch.float64)
    conf = torch.tensor([[0.5, 0.01]], dtype=torch.float64)
    visible = torch.tensor([[True, True]])
    mask = torch.tensor([[False, True]])

    _, terms = grounding_loss(pred, conf, gt, visible, mask)

    # Padded frames are ignored by every term
    assert terms['l1'].item() == 0.
    assert terms['conf'].item() == approx(np.log(2))

def test_grounding_loss_non_negative():

    torch.manual_seed(0)
    for _ in range(10):
        pred = torch.rand(6, 4, dtype=torch.float64) * 0.5 + 0.1
        gt = torch.rand(6, 4, dtype=torch.float64) * 0.5 + 0.1
        conf = torch.rand(6, dtype=torch.float64)
        visible = torch.rand(6) > 0.5
        total, _ = grounding_loss(pred, conf, gt, visible)
        assert total.item() >= 0.
