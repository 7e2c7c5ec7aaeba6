"""
qspine - CLI Helper Functions

Echo helpers, input readers and small parsers shared by the commands.
Reports go to stdout; every message meant for a person goes to stderr so
that report bytes depend only on input and settings.
"""

import json
from pathlib import Path
from typing import Any, Dict, List

import click

from core.linkdiag import FramedLink, read_link_file
from core.presentation import Presentation


def parse_primes(text: str) -> List[int]:
    """
    Parse '5,7,11' into [5, 7, 11]

    Examples:
        >>> parse_primes('5, 7,11')
        [5, 7, 11]

    Raises:
        click.BadParameter: empty list or a non-integer entry
    """
    try:
        primes = [int(tok) for tok in text.replace(' ', '').split(',') if tok]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of primes, got {text!r}")
    if not primes:
        raise click.BadParameter("no primes given")
    return primes


def read_presentation(path: str) -> Presentation:
    """Read a .pres file (ParseError propagates with its position)."""
    return Presentation.parse_file(Path(path))


def read_link(path: str) -> FramedLink:
    return read_link_file(Path(path))


def echo_json(data: Dict[str, Any]) -> None:
    """Deterministic JSON on stdout."""
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def print_error(text: str):
    """Print error message"""
    click.echo(f"❌ {text}", err=True)
