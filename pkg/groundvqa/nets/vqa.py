"""Classifier network that answers a question about a video."""

import torch
import torch.nn as nn
import torch.nn.functional as F

from groundvqa.data import VQANetConfig
from groundvqa.nets.layers import MLP, masked_mean
from groundvqa.nets.features import N_VIDEO_FEATURES

###################################################################################################
###################################################################################################

class VQANet(nn.Module):
    """Score every answer of a closed vocabulary, given video features and a question.

    Parameters
    ----------
    vocab_size : int
        Number of question token ids.
    answer_ids : 2d array of int, shape: [n_answers, n_answer_tokens]
        Token ids of each answer, padded with zeros.
    config : VQANetConfig, optional
        Network dimensions.

    Notes
    -----
    Each answer gets two scores, which are summed: the dot product of the mean token
    embeddings of the question and of the answer, and a linear read out of the fused
    video and question features. The read out starts at zero.
    """

    def __init__(self, vocab_size, answer_ids, config=VQANetConfig()):

        super().__init__()
        self.config = config

        self.register_buffer('answer_ids', torch.as_tensor(answer_ids, dtype=torch.long),
                             persistent=False)

        self.video_proj = nn.Linear(N_VIDEO_FEATURES, config.hidden_dim)
        self.embed = nn.Embedding(vocab_size, config.hidden_dim, padding_idx=0)
        self.fuse = MLP(3 * config.hidden_dim, config.hidden_dim, config.hidden_dim)
        self.head = nn.Linear(config.hidden_dim, len(self.answer_ids))

        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)


    def forward(self, video_feats, token_ids, token_mask=None):
        """Compute answer logits.

        Parameters
        ----------
        video_feats : Tensor, shape: [batch, N_VIDEO_FEATURES]
            Video features.
        token_ids : Tensor of int, shape: [batch, n_tokens]
            Question token ids.
        token_mask : Tensor of bool, shape: [batch, n_tokens], optional
            True for padded tokens.

        Returns
        -------
        Tensor, shape: [batch, n_answers]
        """

        if token_mask is None:
            token_mask = token_ids == 0

        video = self.video_proj(video_feats)
        question = masked_mean(self.embed(token_ids), token_mask)
        answers = masked_mean(self.embed(self.answer_ids), self.answer_ids == 0)

        fused = F.gelu(self.fuse(torch.cat([video, question, video * question], dim=-1)))

        return question @ answers.T + self.head(fused)
