"""Plots sub-module."""

from .tubelets import plot_tubelet
from .hota import plot_hota_curves, plot_training_history
