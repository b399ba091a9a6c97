"""Objects sub-module: model states, trainers and the two-stage pipeline."""

from .ema import ema_init, ema_update, ema_extract
from .vqa import VQAModelState, train_vqa, predict_answer, oracle_answer
from .grounder import GrounderState, train_grounder, predict_tubelet, prediction_loss
from .external import external_answer
from .pipeline import infer_full, predict_split, evaluate_predictions, run_ablation
