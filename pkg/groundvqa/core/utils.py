"""Internal utility functions."""

import json
import hashlib

import numpy as np

from groundvqa.core.errors import ConfigError
from groundvqa.core.modutils import safe_import

###################################################################################################
###################################################################################################

def to_builtin(obj):
    """Recursively convert data objects and arrays to JSON serializable built-in types.

    Parameters
    ----------
    obj : object
        Object to convert. NamedTuples become dictionaries, arrays and tuples become lists.

    Returns
    -------
    object
        Converted object.
    """

    if hasattr(obj, '_asdict'):
        return {key : to_builtin(val) for key, val in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(key) : to_builtin(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()

    return obj


def hash_dict(in_dict, length=16):
    """Compute a stable hash of a JSON serializable dictionary.

    Parameters
    ----------
    in_dict : dict
        Dictionary to hash.
    length : int, optional, default: 16
        Number of hex characters to keep.

    Returns
    -------
    str
        Hex digest of the SHA-256 of the canonical (sorted keys) JSON of the dictionary.
    """

    canonical = json.dumps(to_builtin(in_dict), sort_keys=True, separators=(',', ':'))

    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:length]


def dict_select_keys(in_dict, keep):
    """Restrict a dictionary to only keep specified keys.

    Parameters
    ----------
    in_dict : dict
        Input dictionary.
    keep : list or set
        Keys to retain in the dictionary.

    Returns
    -------
    dict
        Output dictionary containing only keys specified in keep.
    """

    return {ke:va for ke, va in in_dict.items() if ke in keep}


def check_seeds_disjoint(seeds):
    """Check that a collection of seeds has no repeated values.

    Parameters
    ----------
    seeds : dict of {str : int}
        Seeds, keyed by label.

    Raises
    ------
    ValueError
        If any two labels share a seed.
    """

    values = list(seeds.values())
    if len(set(values)) != len(values):
        raise ValueError("Seeds must be disjoint, got: {}.".format(seeds))


def check_config_hash(expected, stored, source):
    """Check that a stored configuration hash matches the current one.

    Parameters
    ----------
    expected : str or None
        Hash of the current configuration. If None, nothing is checked.
    stored : str or None
        Hash stored with an artifact. If None, nothing is checked.
    source : str
        Name of the artifact, for the error message.

    Raises
    ------
    ConfigError
        If both hashes are given and differ.
    """

    if expected is not None and stored is not None and stored != expected:
        raise ConfigError("Configuration hash of {} ({}) does not match the "
                          "current configuration ({}).".format(source, stored, expected))


def progress_bar(iterable, progress, n_to_run, desc='Running'):
    """Add a progress bar to an iterable to be processed.

    Parameters
    ----------
    iterable : list or iterable
        Iterable object to potentially apply progress tracking to.
    progress : {None, 'tqdm', 'tqdm.notebook'}
        Which kind of progress bar to use. If None, no progress bar is used.
    n_to_run : int
        Number of jobs to complete.
    desc : str, optional, default: 'Running'
        Display text for the progress bar.

    Returns
    -------
    pbar : iterable or tqdm object
        Iterable object, with tqdm progress functionality, if requested.

    Raises
    ------
    ValueError
        If the input for `progress` is not understood.

    Notes
    -----
    The explicit `n_to_run` input is required as tqdm requires this in the parallel case.
    """

    tqdm_options = ['tqdm', 'tqdm.notebook']
    if progress is not None and progress not in tqdm_options:
        raise ValueError("Progress bar option not understood.")

    if not progress:
        return iterable

    tqdm = safe_import(progress)

    if not tqdm:
        print(("A progress bar requiring the 'tqdm' module was requested, "
               "but 'tqdm' is not installed. \nProceeding without using a progress bar."))
        return iterable

    return tqdm.tqdm(iterable, desc=desc, total=n_to_run, dynamic_ncols=True)
