"""Error hierarchy shared by every walker module.

All errors carry a short machine code and a details dict so the CLI can print
them as structured JSON.
"""
from __future__ import annotations

from typing import Any, Dict, Optional


class WalkerError(Exception):
    """Base class for all library errors."""

    code = "walker_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": type(self).__name__,
            "code": self.code,
            "message": self.message,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


class DomainError(WalkerError, ValueError):
    code = "domain"


class PoleError(WalkerError):
    """Evaluation hit a pole; ``sign`` is +1/-1 for a signed infinity, 0 if unknown."""

    code = "pole"

    def __init__(self, message: str, pole: Any = None, sign: int = 0, **details: Any):
        super().__init__(message, pole=pole, sign=sign, **details)
        self.pole = pole
        self.sign = sign


class ConvergenceError(WalkerError):
    code = "convergence"


class NonConvergenceError(WalkerError):
    code = "non_convergence"

    def __init__(self, message: str, partial: Any = None, terms: Optional[int] = None, **details: Any):
        super().__init__(message, partial=partial, terms=terms, **details)
        self.partial = partial
        self.terms = terms


class UnsupportedPathError(WalkerError):
    code = "unsupported_path"


class LadderDegenerateError(WalkerError):
    code = "ladder_degenerate"


class UnresolvedCoefficientError(WalkerError):
    code = "unresolved_coefficient"


class AccuracyError(WalkerError):
    code = "accuracy"

    def __init__(self, message: str, best: Any = None, error: Any = None, **details: Any):
        super().__init__(message, best=best, error=error, **details)
        self.best = best
        self.error = error


class DivergenceError(WalkerError):
    code = "divergence"


class ExcludedPointError(WalkerError):
    code = "excluded_point"


class NearSingularityError(WalkerError):
    code = "near_singularity"


class InvariantViolation(WalkerError):
    code = "invariant"


class UnknownConstantError(WalkerError, LookupError):
    code = "unknown_constant"
