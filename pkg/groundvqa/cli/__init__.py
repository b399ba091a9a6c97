"""Command line sub-module: configuration and the `groundvqa` command."""
