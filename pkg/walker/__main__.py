#!/usr/bin/env python3
"""Entry point for ``python -m walker``."""
from .cli import run

if __name__ == "__main__":
    raise SystemExit(run())
