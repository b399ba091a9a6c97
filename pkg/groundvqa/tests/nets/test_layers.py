"""Tests for groundvqa.nets.layers."""

import torch

from groundvqa.nets.layers import *

###################################################################################################
###################################################################################################

def test_sinusoidal_encoding():

    enc = sinusoidal_encoding(10, 8)

    assert enc.shape == (10, 8)
    assert torch.allclose(enc[0, 0::2], torch.zeros(4))
    assert torch.allclose(enc[0, 1::2], torch.ones(4))

    # Positions get distinct encodings
    assert torch.unique(enc, dim=0).shape[0] == 10

    # Odd dimensions are supported
    assert sinusoidal_encoding(4, 5).shape == (4, 5)

def test_coordinate_grid():

    grid = coordinate_grid(2, 4)

    assert grid.shape == (2, 2, 4)
    assert torch.allclose(grid[0, 0], torch.tensor([0.125, 0.375, 0.625, 0.875]))
    assert torch.allclose(grid[1, :, 0], torch.tensor([0.25, 0.75]))

def test_masked_mean():

    values = torch.tensor([[[1.], [3.], [100.]]])
    mask = torch.tensor([[False, False, True]])

    assert torch.allclose(masked_mean(values, mask), torch.tensor([[2.]]))

    # All masked gives zeros, not NaN
    assert torch.allclose(masked_mean(values, torch.ones(1, 3, dtype=torch.bool)),
                          torch.zeros(1, 1))

def test_mlp():

    mlp = MLP(4, 8, 2, n_layers=3)

    assert len(mlp.layers) == 3
    assert mlp(torch.zeros(5, 4)).shape == (5, 2)

def test_film_identity():

    film = FiLM(3, 4)
    feats = torch.randn(2, 4, 5, 5)

    assert torch.allclose(film(feats, torch.randn(2, 3)), feats)
