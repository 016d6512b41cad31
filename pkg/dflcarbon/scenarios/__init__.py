"""Bundled scenario files."""

from pathlib import Path

SCENARIO_DIR = Path(__file__).parent


def scenario_path(name: str) -> Path:
    """Path of a bundled scenario or registry file."""
    return SCENARIO_DIR / name
