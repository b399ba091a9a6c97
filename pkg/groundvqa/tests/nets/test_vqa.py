"""Tests for groundvqa.nets.vqa."""

import numpy as np
import torch

from groundvqa.nets.features import N_VIDEO_FEATURES
from groundvqa.nets.layers import masked_mean

from groundvqa.tests.tutils import TVQA_NET

from groundvqa.nets.vqa import *

###################################################################################################
###################################################################################################

TANSWER_IDS = np.array([[2 + ind % 4, 6 + ind // 4] for ind in range(12)])

def test_vqa_net():

    torch.manual_seed(0)
    net = VQANet(10, TANSWER_IDS, TVQA_NET)

    logits = net(torch.rand(3, N_VIDEO_FEATURES), torch.tensor([[2, 3, 0], [4, 0, 0], [5, 6, 7]]))

    assert logits.shape == (3, 12)
    assert torch.all(torch.isfinite(logits))

    # Answer token ids are not parameters, nor saved
    assert 'answer_ids' not in net.state_dict()

def test_vqa_net_padding():

    torch.manual_seed(0)
    net = VQANet(10, TANSWER_IDS, TVQA_NET)
    feats = torch.rand(1, N_VIDEO_FEATURES)

    assert torch.allclose(net(feats, torch.tensor([[2, 3]])),
                          net(feats, torch.tensor([[2, 3, 0, 0]])))

def test_vqa_net_init_scores():

    torch.manual_seed(0)
    net = VQANet(10, TANSWER_IDS, TVQA_NET)
    token_ids = torch.tensor([[2, 6, 9]])

    # At initialization, scores come from the question and answer embeddings alone
    logits_a = net(torch.zeros(1, N_VIDEO_FEATURES), token_ids)
    logits_b = net(torch.rand(1, N_VIDEO_FEATURES), token_ids)
    assert torch.allclose(logits_a, logits_b)

    with torch.no_grad():
        question = net.embed(token_ids).mean(1)
        answers = masked_mean(net.embed(net.answer_ids), net.answer_ids == 0)
        assert torch.allclose(logits_a, question @ answers.T)
