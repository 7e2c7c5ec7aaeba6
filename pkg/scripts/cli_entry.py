#!/usr/bin/env python3
"""
qspine CLI Entry Point

Usage:
    python scripts/cli_entry.py [command] [options]
"""

import sys
from pathlib import Path

# Add the src directory to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))


def main():
    """Main entry point."""
    try:
        from cli.commands import main as run
    except ImportError as e:
        print(f"Import error: {e}", file=sys.stderr)
        print("Make sure the requirements are installed (pip install -r requirements.txt).", file=sys.stderr)
        sys.exit(4)
    run()


if __name__ == "__main__":
    main()
