"""Exponential moving average of model parameters."""

import numpy as np

from groundvqa.data import EMAState

###################################################################################################
###################################################################################################

def ema_init(params, beta=0.999):
    """Initialize a moving average at a set of parameters.

    Parameters
    ----------
    params : 1d array
        Initial parameter vector. Must be finite.
    beta : float, optional, default: 0.999
        Decay factor, in [0, 1].

    Returns
    -------
    EMAState
        Average equal to a copy of the initial parameters, at step 0.

    Raises
    ------
    ValueError
        If beta is outside [0, 1], or the parameters are not finite.
    """

    if not 0. <= beta <= 1.:
        raise ValueError("The EMA decay factor must be within [0, 1], got {}.".format(beta))

    params = _check_params(params)

    return EMAState(params.copy(), float(beta), 0)


def ema_update(state, params, warmup=False):
    """Update a moving average with the current parameters.

    Parameters
    ----------
    state : EMAState
        Current average.
    params : 1d array
        Parameters after the latest optimizer step.
    warmup : bool, optional, default: False
        Whether to cap the decay at (1 + step) / (10 + step), so that early updates
        move the average further from its initial value.

    Returns
    -------
    EMAState
        Updated average, one step further.

    Raises
    ------
    ValueError
        If the parameters do not match the shape of the average, or are not finite.

    Notes
    -----
    The average is updated as: avg_t = beta * avg_(t-1) + (1 - beta) * params_t.
    With warmup, the decay used is min(beta, (1 + t) / (10 + t)), with t the number of
    updates applied so far.
    """

    params = _check_params(params)
    if params.shape != state.params.shape:
        raise ValueError("Parameter shape {} does not match the EMA shape {}.".format(\
            params.shape, state.params.shape))

    beta = min(state.beta, (1. + state.step) / (10. + state.step)) if warmup else state.beta
    averaged = beta * state.params + (1. - beta) * params

    return EMAState(averaged, state.beta, state.step + 1)


def ema_extract(state):
    """Get a copy of the averaged parameters.

    Parameters
    ----------
    state : EMAState
        Average to extract.

    Returns
    -------
    1d array
        Averaged parameters.
    """

    return state.params.copy()


def _check_params(params):
    """Check a parameter vector, returning it as a float64 array."""

    params = np.asarray(params, dtype=np.float64)
    if not np.all(np.isfinite(params)):
        raise ValueError("EMA parameters must be finite.")

    return params
