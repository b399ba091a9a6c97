"""Sub-module for core functions."""
