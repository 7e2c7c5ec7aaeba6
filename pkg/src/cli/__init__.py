"""
qspine - CLI Interface

Click command group for invariants, identity checks and AC fuzzing.
"""

from .commands import cli, main

__all__ = ["cli", "main"]
