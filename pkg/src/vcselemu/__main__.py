"""Console entrypoint for the vcselemu toolkit.

This module delegates to :mod:`vcselemu.cli` so that running
``python -m vcselemu`` or the installed ``vcselemu`` console script
executes the same code.
"""

from __future__ import annotations

import sys

from vcselemu.cli import main as cli_main


def main() -> None:
    """Application entrypoint (delegates to :func:`vcselemu.cli.main`)."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
