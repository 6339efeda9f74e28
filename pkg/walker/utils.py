"""Small helpers: logging setup, file output and number formatting."""
from __future__ import annotations

import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

import mpmath

_LOGGER = logging.getLogger("walker")
_CONFIGURED = False


def configure_logging(level: Union[int, str] = "WARNING") -> logging.Logger:
    """Attach the stderr handler once and set the package log level."""
    global _CONFIGURED
    if not _CONFIGURED:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("[walker] %(levelname)s %(message)s"))
        _LOGGER.addHandler(handler)
        _LOGGER.propagate = False
        _CONFIGURED = True
    _LOGGER.setLevel(level)
    return _LOGGER


def log(msg: str) -> None:
    _LOGGER.info(msg)


def write_file(path: Union[str, Path], content: str) -> None:
    _LOGGER.debug("writing %s", path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(content)


def format_real(value: Any, digits: int) -> str:
    """Render a real with exactly ``digits`` significant digits; rationals stay exact."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) and value != value:
        return "nan"
    return mpmath.nstr(mpmath.mpf(value), digits, strip_zeros=False, min_fixed=-4, max_fixed=digits)
