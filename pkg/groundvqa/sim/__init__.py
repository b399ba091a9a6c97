"""Simulation sub-module, for generating synthetic videos with exact ground truth."""

from .scene import generate_scene
from .render import render_video, SceneFrames
from .qa import derive_qa
from .splits import build_split, default_splits, load_frames, ArchiveFrames
