"""Utilities sub-module."""

from .debug import sys_info
