"""Tests for groundvqa.nets.grounder."""

import numpy as np
import torch
from pytest import mark

from groundvqa.data import GrounderConfig
from groundvqa.nets.features import FRAME_REGION_BOX, batch_regions
from groundvqa.nets.losses import grounding_loss

from groundvqa.tests.tutils import TGROUNDER

from groundvqa.nets.grounder import *

###################################################################################################
###################################################################################################

def test_grounding_net():

    torch.manual_seed(0)
    net = GroundingNet(10, TGROUNDER)

    frames = torch.rand(2, 5, 20, 24, 3)
    token_ids = torch.tensor([[2, 3, 4, 0], [5, 6, 0, 0]])
    boxes, conf = net(frames, token_ids)

    assert boxes.shape == (2, 5, 4)
    assert conf.shape == (2, 5)
    assert torch.all((boxes >= 0) & (boxes <= 1))
    assert torch.all((conf >= 0) & (conf <= 1))

def test_grounding_net_padding():

    torch.manual_seed(0)
    net = GroundingNet(10, TGROUNDER).eval()

    frames = torch.rand(1, 3, 16, 16, 3)
    token_ids = torch.tensor([[2, 3]])
    boxes, conf = net(frames, token_ids)

    # Padding the prompt does not change the output
    padded_boxes, padded_conf = net(frames, torch.tensor([[2, 3, 0, 0]]))
    assert torch.allclose(boxes, padded_boxes, atol=1e-5)
    assert torch.allclose(conf, padded_conf, atol=1e-5)

def test_text_encoder():

    encoder = TextEncoder(10, TGROUNDER)
    out = encoder(torch.tensor([[1, 2, 3]]))

    assert out.shape == (1, 3, TGROUNDER.d_model)

def test_visual_encoder():

    encoder = VisualEncoder(TGROUNDER)
    out = encoder(torch.rand(2, 4, 16, 16, 3), torch.rand(2, TGROUNDER.d_model))

    assert out.shape == (2, 4, TGROUNDER.d_model)

@mark.parametrize('seed', [0, 1, 2])
def test_grounding_gradients(seed):
    """Check analytic gradients of the grounding loss against finite differences."""

    config = GrounderConfig(visual_channels=4, text_dim=8, d_model=8, n_heads=2,
                            n_enc_layers=1, n_dec_layers=1, max_sampled_frames=8,
                            max_tokens=6, frame_size=16)

    torch.manual_seed(seed)
    net = GroundingNet(10, config).double().train()

    frames = torch.rand(2, 3, 16, 16, 3, dtype=torch.float64) * 0.3
    frames[:, :, 2:7, 3:9] = torch.tensor([1., 0., 0.], dtype=torch.float64)
    frames[0, :, 9:14, 8:12] = torch.tensor([0., 0., 1.], dtype=torch.float64)
    token_ids = torch.randint(1, 10, (2, 4))
    gt_boxes = torch.rand(2, 3, 4, dtype=torch.float64) * 0.4 + 0.2
    visible = torch.tensor([[True, False, True], [True, True, False]])

    def loss_value():
        boxes, conf = net(frames, token_ids)
        return grounding_loss(boxes, conf, gt_boxes, visible)[0]

    net.zero_grad()
    loss_value().backward()

    params = [param for param in net.parameters() if param.requires_grad]
    rng = np.random.default_rng(seed)

    analytic, numeric = [], []
    eps = 1e-6
    with torch.no_grad():
        for _ in range(50):
            param = params[int(rng.integers(len(params)))]
            ind = int(rng.integers(param.numel()))
            flat = param.view(-1)

            orig = flat[ind].item()
            flat[ind] = orig + eps
            upper = loss_value().item()
            flat[ind] = orig - eps
            lower = loss_value().item()
            flat[ind] = orig

            numeric.append((upper - lower) / (2 * eps))
            analytic.append(param.grad.view(-1)[ind].item())

    analytic, numeric = np.array(analytic), np.array(numeric)

    assert np.linalg.norm(analytic - numeric) <= 1e-3 * max(np.linalg.norm(numeric), 1e-8)

def test_grounding_net_blank_frames():

    torch.manual_seed(0)
    net = GroundingNet(10, TGROUNDER).eval()

    # With no regions, the pointer can only select the whole-frame slot
    boxes, _ = net(torch.zeros(1, 3, 16, 16, 3), torch.tensor([[2, 3]]))

    assert torch.allclose(boxes, torch.tensor(FRAME_REGION_BOX).expand(1, 3, 4), atol=1e-5)

def test_grounding_net_given_regions():

    torch.manual_seed(0)
    net = GroundingNet(10, TGROUNDER).eval()

    frames = torch.zeros(1, 2, 16, 16, 3)
    frames[:, :, 4:10, 4:10] = torch.tensor([0., 1., 0.])
    token_ids = torch.tensor([[2, 3, 4]])

    boxes, conf = net(frames, token_ids)
    given_boxes, given_conf = net(frames, token_ids,
                                  regions=batch_regions(frames.numpy(), TGROUNDER.max_regions))

    assert torch.allclose(boxes, given_boxes)
    assert torch.allclose(conf, given_conf)

    # At initialization, boxes lie between the frame slot and the region
    assert torch.all(boxes[..., 2:] >= 6 / 16 - 1e-5)
    assert torch.all(boxes[..., 2:] <= 0.5 + 1e-5)
