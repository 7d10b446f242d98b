"""Cheeger constants and phase retrieval stability for filter banks on Z_N."""

from ._cheegerlab import *  # noqa: F401,F403
from ._cheegerlab import Error, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]


def main() -> int:
    import sys

    code, out, err = run_cli(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
