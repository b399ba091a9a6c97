"""Data sub-module."""

from .data import (BoundingBox, Tubelet, VideoMeta, SamplingConfig, QASample, Violation,
                   SceneObject, SceneSpec, SceneParams, DatasetSplitSpec, AnswerResult,
                   Prompt, VQANetConfig, VQATrainConfig, GrounderConfig, GrounderTrainConfig,
                   SparseTubeletPrediction, EMAConfig, EMAState, ExternalEndpoint,
                   Prediction, TrackSet, HOTAReport, PathConfig, RunConfig)
