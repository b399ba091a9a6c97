"""Configuration file for pytest."""

import os
import shutil
import pytest

import numpy as np

from groundvqa.core.modutils import safe_import
from groundvqa.tests.tutils import (get_tscenes, get_tsamples, get_tframes, get_tvqa,
                                    get_tgrounder, get_tsample, get_tvideo, get_treport)
from groundvqa.tests.settings import (BASE_TEST_FILE_PATH, TEST_DATA_PATH, TEST_MODELS_PATH,
                                      TEST_REPORTS_PATH, TEST_PLOTS_PATH)

plt = safe_import('.pyplot', 'matplotlib')

###################################################################################################
###################################################################################################

def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: end-to-end training runs, taking a minute or so')
    if plt:
        plt.switch_backend('agg')
    np.random.seed(13)

@pytest.fixture(scope='session', autouse=True)
def check_dir():
    """Once, prior to session, this will clear and re-initialize the test file directories."""

    # If the directories already exist, clear them
    if os.path.exists(BASE_TEST_FILE_PATH):
        shutil.rmtree(BASE_TEST_FILE_PATH)

    # Remake (empty) directories
    os.mkdir(BASE_TEST_FILE_PATH)
    os.mkdir(TEST_DATA_PATH)
    os.mkdir(TEST_MODELS_PATH)
    os.mkdir(TEST_REPORTS_PATH)
    os.mkdir(TEST_PLOTS_PATH)

@pytest.fixture(scope='session')
def tscenes():
    yield get_tscenes()

@pytest.fixture(scope='session')
def tsamples(tscenes):
    yield get_tsamples(tscenes)

@pytest.fixture(scope='session')
def tframes(tscenes):
    yield get_tframes(tscenes)

@pytest.fixture(scope='session')
def tvqa(tsamples, tframes):
    yield get_tvqa(tsamples, tframes)

@pytest.fixture(scope='session')
def tgrounder(tsamples, tframes):
    yield get_tgrounder(tsamples, tframes)

@pytest.fixture(scope='session')
def treport():
    yield get_treport()

@pytest.fixture(scope='function')
def tvideo():
    yield get_tvideo()

@pytest.fixture(scope='function')
def tsample():
    yield get_tsample()

@pytest.fixture(scope='session')
def skip_if_no_mpl():
    if not safe_import('matplotlib'):
        pytest.skip('Matplotlib not available: skipping test.')

@pytest.fixture(scope='session')
def skip_if_no_pandas():
    if not safe_import('pandas'):
        pytest.skip('Pandas not available: skipping test.')

@pytest.fixture(scope='session')
def skip_if_no_toml():
    if not (safe_import('tomllib') or safe_import('tomli')):
        pytest.skip('TOML reader not available: skipping test.')
