"""Command-line interface."""

from dflcarbon.cli.cli import CLI
from dflcarbon.cli.main import main

__all__ = ['CLI', 'main']
