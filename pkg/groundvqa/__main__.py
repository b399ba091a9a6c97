"""Run the `groundvqa` command with `python -m groundvqa`."""

import sys

from groundvqa.cli.main import main

sys.exit(main())
