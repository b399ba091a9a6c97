"""Tests for groundvqa.cli.main, running the command end to end on a tiny configuration."""

import os
import filecmp

import pytest

from groundvqa.sim.splits import ANNOTATION_FILE, MANIFEST_FILE

from groundvqa.cli.main import *

###################################################################################################
###################################################################################################

TINY_CONFIG = """
[paths]
data = "{root}/data"
checkpoints = "{root}/checkpoints"
reports = "{root}/reports"

[sampling]
target_fps = 10.0

[scene]
width = 32
height = 32
min_frames = 12
max_frames = 18
min_objects = 2
max_objects = 3
min_size = 6.0
max_size = 9.0
max_speed = 0.5

[splits]
train_samples = 6
val_samples = 3
test_samples = 3

[vqa]
epochs = 2
lr = 1e-2
batch_size = 4
hidden_dim = 8
max_tokens = 12

[grounder]
visual_channels = 4
text_dim = 8
d_model = 8
n_heads = 2
n_enc_layers = 1
n_dec_layers = 1
max_tokens = 12
frame_size = 16

[grounder.train]
epochs = 2
lr = 1e-3
batch_size = 4

[ema]
beta = 0.9
"""

###################################################################################################
###################################################################################################

def _write_config(root):

    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, 'config.toml')
    with open(path, 'w') as f_obj:
        f_obj.write(TINY_CONFIG.format(root=str(root).replace(os.sep, '/')))

    return path

def _run_all(root):
    """Generate data, train both stages and predict the val split, returning the config."""

    config = _write_config(root)
    assert main(['gen-data', '--config', config, '--quiet']) == 0
    assert main(['train', '--stage', 'vqa', '--config', config, '--quiet']) == 0
    assert main(['train', '--stage', 'grounder', '--config', config, '--quiet']) == 0
    assert main(['infer', '--split', 'val', '--config', config, '--quiet']) == 0

    return config

@pytest.fixture(scope='module')
def trun(tmp_path_factory, skip_if_no_toml):

    root = tmp_path_factory.mktemp('run')
    yield root, _run_all(root)

def test_gen_data(trun):

    root, _ = trun

    assert os.path.exists(os.path.join(root, 'data', MANIFEST_FILE))
    for split in ['train', 'val', 'test']:
        assert os.path.exists(os.path.join(root, 'data', split, ANNOTATION_FILE))
        assert os.path.exists(os.path.join(root, 'data', split, MANIFEST_FILE))

    for file_name in [VQA_CKPT, VQA_META, GROUNDER_CKPT, GROUNDER_EMA_CKPT, GROUNDER_META]:
        assert os.path.exists(os.path.join(root, 'checkpoints', file_name))

def test_determinism(trun, tmp_path):

    root, _ = trun
    _run_all(tmp_path)

    for parts in [('data', MANIFEST_FILE), ('data', 'train', ANNOTATION_FILE),
                  ('data', 'test', ANNOTATION_FILE), ('checkpoints', VQA_CKPT),
                  ('checkpoints', GROUNDER_CKPT), ('checkpoints', GROUNDER_EMA_CKPT),
                  ('reports', PREDICTIONS_FILE.format('val'))]:
        assert filecmp.cmp(os.path.join(root, *parts), os.path.join(tmp_path, *parts),
                           shallow=False)

def test_outputs_exist(trun, capsys):

    _, config = trun

    assert main(['gen-data', '--config', config, '--quiet']) == 1
    assert 'OutputExistsError' in capsys.readouterr().err

def test_eval(trun, capsys):

    root, config = trun
    preds = os.path.join(root, 'reports', PREDICTIONS_FILE.format('val'))
    anns = os.path.join(root, 'data', 'val', ANNOTATION_FILE)

    assert main(['eval', '--predictions', preds, '--annotations', anns,
                 '--config', config, '--quiet']) == 0
    out = capsys.readouterr().out
    assert out.startswith('HOTA=')

    hota = float(out.strip().split('=')[1])
    assert 0. <= hota <= 1.
    assert os.path.exists(os.path.join(root, 'reports', REPORT_FILE.format('val')))

def test_eval_ground_truth(trun, capsys):

    root, config = trun
    anns = os.path.join(root, 'data', 'val', ANNOTATION_FILE)
    report = os.path.join(root, 'reports', 'hota_gt.json')

    assert main(['eval', '--predictions', anns, '--annotations', anns, '--report', report,
                 '--config', config, '--quiet']) == 0
    assert capsys.readouterr().out.strip() == 'HOTA=1.0'

def test_infer_oracle(trun, capsys):

    root, config = trun

    assert main(['infer', '--split', 'val', '--answers', 'oracle', '--force',
                 '--config', config, '--quiet']) == 0

    # The test split is released without answers
    assert main(['infer', '--split', 'test', '--answers', 'oracle',
                 '--config', config, '--quiet']) == 1
    assert 'AnswersUnavailableError' in capsys.readouterr().err
    assert not os.path.exists(os.path.join(root, 'reports', PREDICTIONS_FILE.format('test')))

def test_infer_prompt_mode_mismatch(trun, capsys):

    _, config = trun

    assert main(['infer', '--split', 'val', '--prompt-mode', 'question', '--force',
                 '--config', config, '--quiet']) == 1
    assert 'ConfigError' in capsys.readouterr().err

def test_infer_no_model(tmp_path, capsys, skip_if_no_toml):

    config = _write_config(tmp_path)

    assert main(['infer', '--split', 'val', '--config', config, '--quiet']) == 1
    assert 'NoDataError' in capsys.readouterr().err

    assert main(['gen-data', '--config', config, '--quiet']) == 0
    assert main(['infer', '--split', 'val', '--config', config, '--quiet']) == 1
    assert 'NoModelError' in capsys.readouterr().err

def test_create_parser():

    parser = create_parser()
    args = parser.parse_args(['infer', '--split', 'val', '--answers', 'oracle'])

    assert args.command == 'infer'
    assert args.answers == 'oracle'
    assert not args.raw_weights
