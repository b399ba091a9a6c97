"""Two-stage grounded video question answering."""

from .version import __version__

from .core.prompts import compose
from .objs import (VQAModelState, GrounderState, train_vqa, train_grounder, predict_answer,
                   predict_tubelet, infer_full, run_ablation)
from .analysis import compute_hota
