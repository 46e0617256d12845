"""Stochastic feedback volatility model."""

from ._core import *  # noqa: F401,F403
from ._core import DataError, NumericalError, run

__all__ = [name for name in dir() if not name.startswith("_")]


def run_command(command, **config):
    """Run a command with keyword config values, e.g. run_command("simulate", T=1000, out_dir="out")."""
    return run(command, {k: ",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v)
                         for k, v in config.items()})
