"""Analysis sub-module: evaluation of predicted tracks."""

from .hota import ALPHAS, match_frame, compute_hota, build_track_sets, write_report, read_report
