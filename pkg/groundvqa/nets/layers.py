"""Building blocks shared by the networks."""

import math

import torch
import torch.nn as nn
import torch.nn.functional as F

###################################################################################################
###################################################################################################

def sinusoidal_encoding(n_positions, dim, dtype=torch.float32):
    """Compute sinusoidal position encodings.

    Parameters
    ----------
    n_positions : int
        Number of positions to encode.
    dim : int
        Dimensionality of each encoding.

    Returns
    -------
    Tensor, shape: [n_positions, dim]
        Encodings, with sines on even and cosines on odd dimensions.
    """

    positions = torch.arange(n_positions, dtype=dtype).unsqueeze(1)
    freqs = torch.exp(torch.arange(0, dim, 2, dtype=dtype) * (-math.log(10000.) / dim))

    encoding = torch.zeros(n_positions, dim, dtype=dtype)
    encoding[:, 0::2] = torch.sin(positions * freqs)
    encoding[:, 1::2] = torch.cos(positions * freqs)[:, :dim // 2]

    return encoding


def coordinate_grid(height, width, dtype=torch.float32, device=None):
    """Get the normalized (x, y) coordinates of pixel centers.

    Returns
    -------
    Tensor, shape: [2, height, width]
        Normalized x and y coordinates, in (0, 1).
    """

    ys = (torch.arange(height, dtype=dtype, device=device) + 0.5) / height
    xs = (torch.arange(width, dtype=dtype, device=device) + 0.5) / width
    grid_y, grid_x = torch.meshgrid(ys, xs, indexing='ij')

    return torch.stack([grid_x, grid_y])


def masked_mean(values, mask):
    """Average over the second dimension, ignoring masked positions.

    Parameters
    ----------
    values : Tensor, shape: [batch, n, dim]
        Values to average.
    mask : Tensor of bool, shape: [batch, n]
        True for positions to ignore.

    Returns
    -------
    Tensor, shape: [batch, dim]
    """

    keep = (~mask).to(values.dtype).unsqueeze(-1)

    return (values * keep).sum(1) / keep.sum(1).clamp(min=1.)


class MLP(nn.Module):
    """Multi-layer perceptron with GELU activations between layers."""

    def __init__(self, in_dim, hidden_dim, out_dim, n_layers=2):

        super().__init__()
        dims = [in_dim] + [hidden_dim] * (n_layers - 1) + [out_dim]
        self.layers = nn.ModuleList(nn.Linear(d_in, d_out) \
                                        for d_in, d_out in zip(dims[:-1], dims[1:]))


    def forward(self, x):

        for ind, layer in enumerate(self.layers):
            x = layer(x)
            if ind < len(self.layers) - 1:
                x = F.gelu(x)

        return x


class FiLM(nn.Module):
    """Feature-wise affine modulation of feature maps by a conditioning vector.

    Parameters
    ----------
    cond_dim : int
        Dimensionality of the conditioning vector.
    n_channels : int
        Number of channels of the modulated feature maps.

    Notes
    -----
    The modulation is initialized to the identity.
    """

    def __init__(self, cond_dim, n_channels):

        super().__init__()
        self.proj = nn.Linear(cond_dim, 2 * n_channels)
        nn.init.zeros_(self.proj.weight)
        nn.init.zeros_(self.proj.bias)


    def forward(self, feats, cond):
        """Modulate feature maps of shape [batch, channels, h, w] by [batch, cond_dim]."""

        gamma, beta = self.proj(cond).chunk(2, dim=-1)

        return feats * (1 + gamma[:, :, None, None]) + beta[:, :, None, None]
