"""Encoder-decoder network that grounds a prompt to one box per sampled frame."""

import math

import torch
import torch.nn as nn
import torch.nn.functional as F

from groundvqa.data import GrounderConfig
from groundvqa.nets.features import N_REGION_FEATURES, batch_regions
from groundvqa.nets.layers import (MLP, FiLM, sinusoidal_encoding,
                                   coordinate_grid, masked_mean)

###################################################################################################
###################################################################################################

# Initial scale of the cosine similarities between pointer queries and region keys
POINTER_SCALE = 10.
# Clipping of reference boxes before taking their logit
BOX_EPS = 1e-4

###################################################################################################
###################################################################################################

class TextEncoder(nn.Module):
    """Embed prompt tokens, with learned positions, into the model dimension."""

    def __init__(self, vocab_size, config):

        super().__init__()
        self.embed = nn.Embedding(vocab_size, config.text_dim, padding_idx=0)
        self.position = nn.Embedding(config.max_tokens, config.text_dim)
        self.proj = nn.Linear(config.text_dim, config.d_model)


    def forward(self, token_ids):

        positions = torch.arange(token_ids.shape[1], device=token_ids.device)

        return self.proj(self.embed(token_ids) + self.position(positions))


class VisualEncoder(nn.Module):
    """Encode each frame into a single prompt-conditioned token.

    Notes
    -----
    Frames are convolved together with their pixel coordinates by two strided blocks,
    modulated by the prompt, and mean-pooled over space.
    """

    def __init__(self, config):

        super().__init__()
        self.frame_size = config.frame_size
        self.conv1 = nn.Conv2d(5, config.visual_channels, 3, stride=2, padding=1)
        self.conv2 = nn.Conv2d(config.visual_channels, config.d_model, 3, stride=2, padding=1)
        self.film = FiLM(config.d_model, config.d_model)


    def forward(self, frames, text_summary):
        """Encode frames.

        Parameters
        ----------
        frames : Tensor, shape: [batch, n_frames, height, width, 3]
            RGB frames, with values in [0, 1].
        text_summary : Tensor, shape: [batch, d_model]
            Pooled prompt embedding.

        Returns
        -------
        Tensor, shape: [batch, n_frames, d_model]
        """

        n_batch, n_frames = frames.shape[:2]
        images = frames.reshape(n_batch * n_frames, *frames.shape[2:]).permute(0, 3, 1, 2)
        if images.shape[-2:] != (self.frame_size, self.frame_size):
            images = F.interpolate(images, size=(self.frame_size, self.frame_size),
                                   mode='bilinear', align_corners=False)

        grid = coordinate_grid(self.frame_size, self.frame_size, images.dtype, images.device)
        images = torch.cat([images, grid.expand(images.shape[0], -1, -1, -1)], dim=1)

        cond = text_summary.repeat_interleave(n_frames, dim=0)
        feats = self.conv2(F.gelu(self.conv1(images)))
        feats = F.gelu(self.film(feats, cond))

        return feats.mean(dim=(2, 3)).reshape(n_batch, n_frames, -1)


class GroundingNet(nn.Module):
    """Predict a box and a confidence per sampled frame, from frames and a prompt.

    Parameters
    ----------
    vocab_size : int
        Number of prompt token ids.
    config : GrounderConfig, optional
        Network dimensions.

    Notes
    -----
    Frame tokens, region tokens and prompt tokens are encoded jointly. The decoder has
    one query per sampled frame, each a learned embedding plus the temporal encoding
    of its frame, and the decoded query is summed with the encoded token of its frame.

    Boxes are read out with a pointer over the regions of each frame: the prompt and
    the decoded query score every region by cosine similarity, the region boxes are
    averaged with the softmax of those scores, and the box head refines the average
    in logit space. The refinement and the context terms of the pointer start at zero.
    """

    def __init__(self, vocab_size, config=GrounderConfig()):

        super().__init__()
        self.config = config
        d_model = config.d_model

        self.text_encoder = TextEncoder(vocab_size, config)
        self.visual_encoder = VisualEncoder(config)
        self.region_encoder = MLP(N_REGION_FEATURES, d_model, d_model)

        self.register_buffer('temporal_encoding',
                             sinusoidal_encoding(config.max_sampled_frames, d_model),
                             persistent=False)
        # Frames, prompt tokens and regions
        self.modality = nn.Embedding(3, d_model)

        self.encoder = nn.TransformerEncoder(
            nn.TransformerEncoderLayer(d_model, config.n_heads, 2 * d_model, dropout=0.,
                                       activation='gelu', batch_first=True),
            config.n_enc_layers, enable_nested_tensor=False)
        self.decoder = nn.TransformerDecoder(
            nn.TransformerDecoderLayer(d_model, config.n_heads, 2 * d_model, dropout=0.,
                                       activation='gelu', batch_first=True),
            config.n_dec_layers)
        self.query_embed = nn.Embedding(config.max_sampled_frames, d_model)

        self.pointer_query = nn.Linear(d_model, d_model)
        self.pointer_key = nn.Linear(d_model, d_model)
        self.pointer_context = nn.Linear(d_model, d_model)
        self.pointer_memory = nn.Linear(d_model, d_model)
        self.pointer_scale = nn.Parameter(torch.tensor(math.log(POINTER_SCALE)))

        self.box_head = MLP(2 * d_model, d_model, 4)
        self.conf_head = nn.Linear(2 * d_model, 1)

        for layer in [self.pointer_context, self.pointer_memory, self.box_head.layers[-1]]:
            nn.init.zeros_(layer.weight)
            nn.init.zeros_(layer.bias)


    def forward(self, frames, token_ids, frame_mask=None, token_mask=None, regions=None):
        """Run the network.

        Parameters
        ----------
        frames : Tensor, shape: [batch, n_frames, height, width, 3]
            Sampled RGB frames, in temporal order, with values in [0, 1].
        token_ids : Tensor of int, shape: [batch, n_tokens]
            Prompt token ids.
        frame_mask : Tensor of bool, shape: [batch, n_frames], optional
            True for padded frames.
        token_mask : Tensor of bool, shape: [batch, n_tokens], optional
            True for padded tokens.
        regions : tuple of Tensor, optional
            Region descriptors, boxes and empty-slot mask of the frames, as returned by
            `batch_regions`. Computed from the frames if not given.

        Returns
        -------
        boxes : Tensor, shape: [batch, n_frames, 4]
            Normalized boxes, as (cx, cy, w, h), in [0, 1].
        conf : Tensor, shape: [batch, n_frames]
            Visibility confidences, in [0, 1].
        """

        n_batch, n_frames = frames.shape[:2]
        if frame_mask is None:
            frame_mask = torch.zeros(n_batch, n_frames, dtype=torch.bool, device=frames.device)
        if token_mask is None:
            token_mask = token_ids == 0
        if regions is None:
            regions = batch_regions(frames.detach().cpu().numpy(), self.config.max_regions)

        region_feats, region_boxes, region_mask = [torch.as_tensor(arr, device=frames.device) \
            for arr in regions]
        region_feats = region_feats.to(frames.dtype)
        region_boxes = region_boxes.to(frames.dtype)
        n_regions = region_feats.shape[2]

        text = self.text_encoder(token_ids) + self.modality.weight[1]
        text_summary = masked_mean(text, token_mask)

        temporal = self.temporal_encoding[:n_frames].to(frames.dtype)
        visual = self.visual_encoder(frames, text_summary) + temporal + self.modality.weight[0]

        region_embed = self.region_encoder(region_feats)
        region_tokens = region_embed + temporal[:, None] + self.modality.weight[2]
        region_pad = region_mask | frame_mask[:, :, None]

        memory_mask = torch.cat([frame_mask, region_pad.flatten(1), token_mask], dim=1)
        memory = self.encoder(torch.cat([visual, region_tokens.flatten(1, 2), text], dim=1),
                              src_key_padding_mask=memory_mask)

        queries = self.query_embed.weight[:n_frames] + temporal
        decoded = self.decoder(queries.expand(n_batch, -1, -1), memory,
                               tgt_key_padding_mask=frame_mask,
                               memory_key_padding_mask=memory_mask)
        decoded = decoded + memory[:, :n_frames]

        encoded_regions = memory[:, n_frames:n_frames * (n_regions + 1)].reshape(\
            n_batch, n_frames, n_regions, -1)
        query = F.normalize(self.pointer_query(text_summary)[:, None] + \
                            self.pointer_context(decoded), dim=-1)
        keys = F.normalize(self.pointer_key(region_embed) + \
                           self.pointer_memory(encoded_regions), dim=-1)

        scores = self.pointer_scale.exp() * torch.einsum('bnd,bnrd->bnr', query, keys)
        weights = torch.softmax(scores.masked_fill(region_mask, float('-inf')), dim=-1)

        reference = torch.einsum('bnr,bnrc->bnc', weights, region_boxes)
        selected = torch.einsum('bnr,bnrd->bnd', weights, region_embed)
        head_input = torch.cat([decoded, selected], dim=-1)

        boxes = torch.sigmoid(torch.logit(reference, eps=BOX_EPS) + self.box_head(head_input))
        conf = torch.sigmoid(self.conf_head(head_input)).squeeze(-1)

        return boxes, conf
