"""Utilities for seeding networks and moving their parameters in and out of flat vectors."""

import numpy as np
import torch
from torch.nn.utils import parameters_to_vector, vector_to_parameters

from groundvqa.core.errors import DataError

###################################################################################################
###################################################################################################

def seed_torch(seed):
    """Seed the torch random generators."""

    torch.manual_seed(seed)


def set_deterministic(enabled=True):
    """Request, or release, deterministic torch kernels for the whole process.

    Notes
    -----
    Kernels without a deterministic version warn, rather than raise.
    """

    torch.use_deterministic_algorithms(enabled, warn_only=True)


def count_parameters(module):
    """Count the trainable parameters of a network."""

    return sum(param.numel() for param in module.parameters())


def get_parameters(module):
    """Get the parameters of a network as a flat float64 array."""

    with torch.no_grad():
        return parameters_to_vector(module.parameters()).detach().cpu().numpy().astype(np.float64)


def set_parameters(module, params):
    """Set the parameters of a network from a flat array.

    Parameters
    ----------
    module : torch.nn.Module
        Network to update, in place.
    params : 1d array
        Parameter vector, in the order of `module.parameters()`.

    Raises
    ------
    DataError
        If the vector length does not match the network, or has non-finite values.
    """

    params = np.asarray(params)
    n_params = count_parameters(module)

    if params.ndim != 1 or params.size != n_params:
        raise DataError("Parameter vector of size {} does not match the network, "
                        "which has {} parameters.".format(params.size, n_params))
    if not np.all(np.isfinite(params)):
        raise DataError("Parameter vector has non-finite values.")

    dtype = next(module.parameters()).dtype
    with torch.no_grad():
        vector_to_parameters(torch.as_tensor(params, dtype=dtype), module.parameters())
